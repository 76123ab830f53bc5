#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace ksso {

// Fixed-universe bit set over dense state indices. Belief states and
// secret/initial markings are all subsets of one automaton's state set,
// so every set carries the universe size and supports word-wise ops.
class StateSet {
public:
    StateSet() = default;

    explicit StateSet(std::size_t universe)
        : size_(universe), words_((universe + 63) / 64, 0) {}

    StateSet(std::size_t universe, std::initializer_list<std::size_t> members)
        : StateSet(universe) {
        for (std::size_t m : members) set(m);
    }

    std::size_t universe_size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= word(1) << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(word(1) << (i & 63)); }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    bool any() const {
        for (word w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t n = 0;
        for (word w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    StateSet& operator|=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    StateSet& operator&=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    // set difference: this \ o
    StateSet& operator-=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    bool is_subset_of(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool operator==(const StateSet& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }
    bool operator!=(const StateSet& o) const { return !(*this == o); }

    // orders sets like their sorted member sequences, so {0,1,2,3} < {4}
    bool operator<(const StateSet& o) const {
        std::size_t a = first(), b = o.first();
        while (a != npos && b != npos) {
            if (a != b) return a < b;
            a = next(a);
            b = o.next(b);
        }
        return a == npos && b != npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t first() const { return scan(0); }
    std::size_t next(std::size_t i) const { return scan(i + 1); }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = first(); i != npos; i = next(i)) f(i);
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::size_t h = size_;
        for (word w : words_) h = h * 1099511628211ull + static_cast<std::size_t>(w);
        return h;
    }

private:
    using word = std::uint64_t;

    std::size_t scan(std::size_t from) const {
        if (from >= size_) return npos;
        std::size_t wi = from >> 6;
        word w = words_[wi] & (~word(0) << (from & 63));
        while (true) {
            if (w) {
                std::size_t i = (wi << 6) + static_cast<std::size_t>(__builtin_ctzll(w));
                return i < size_ ? i : npos;
            }
            if (++wi == words_.size()) return npos;
            w = words_[wi];
        }
    }

    std::size_t size_ = 0;
    std::vector<word> words_;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

} // namespace ksso
