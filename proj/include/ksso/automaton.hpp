#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitset.hpp"

namespace ksso {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Event alphabet partitioned into observable and unobservable events.
// Event names are kept sorted so indices give a stable iteration order.
class EventAlphabet {
public:
    EventAlphabet() = default;

    // names must be unique; observable[i] classifies names[i]
    EventAlphabet(std::vector<std::string> names, std::vector<bool> observable) {
        std::vector<std::size_t> order(names.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
        for (std::size_t i : order) {
            names_.push_back(std::move(names[i]));
            observable_.push_back(observable[i]);
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t e) const { return names_[e]; }
    bool observable(std::size_t e) const { return observable_[e]; }

    std::optional<std::size_t> index(std::string_view name) const {
        auto it = std::lower_bound(names_.begin(), names_.end(), name);
        if (it == names_.end() || *it != name) return std::nullopt;
        return static_cast<std::size_t>(it - names_.begin());
    }

    std::size_t index_checked(std::string_view name) const {
        auto i = index(name);
        if (!i) throw UsageError("unknown event \"" + std::string(name) + "\"");
        return *i;
    }

    std::vector<std::size_t> observable_events() const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < size(); ++e)
            if (observable_[e]) out.push_back(e);
        return out;
    }

    std::vector<std::size_t> unobservable_events() const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < size(); ++e)
            if (!observable_[e]) out.push_back(e);
        return out;
    }

    bool operator==(const EventAlphabet& o) const {
        return names_ == o.names_ && observable_ == o.observable_;
    }

private:
    std::vector<std::string> names_;     // sorted
    std::vector<bool> observable_;
};

// Nondeterministic finite automaton with initial states and a secret-state
// marking. States are referred to by dense indices; names are kept sorted so
// equal models serialize identically. delta(x, e) returns the empty set for
// undefined pairs.
class Automaton {
public:
    Automaton() = default;

    Automaton(std::vector<std::string> state_names, EventAlphabet alphabet)
        : alphabet_(std::move(alphabet)) {
        std::sort(state_names.begin(), state_names.end());
        states_ = std::move(state_names);
        const std::size_t n = states_.size();
        delta_.assign(n * alphabet_.size(), StateSet(n));
        initials_ = StateSet(n);
        secrets_ = StateSet(n);
    }

    std::size_t state_count() const { return states_.size(); }
    const std::string& state_name(std::size_t x) const { return states_[x]; }
    const std::vector<std::string>& state_names() const { return states_; }
    const EventAlphabet& alphabet() const { return alphabet_; }

    std::optional<std::size_t> state_index(std::string_view name) const {
        auto it = std::lower_bound(states_.begin(), states_.end(), name);
        if (it == states_.end() || *it != name) return std::nullopt;
        return static_cast<std::size_t>(it - states_.begin());
    }

    std::size_t state_index_checked(std::string_view name) const {
        auto i = state_index(name);
        if (!i) throw UsageError("unknown state \"" + std::string(name) + "\"");
        return *i;
    }

    void add_transition(std::size_t src, std::size_t event, std::size_t dst) {
        delta_[src * alphabet_.size() + event].set(dst);
    }

    const StateSet& delta(std::size_t x, std::size_t e) const {
        return delta_[x * alphabet_.size() + e];
    }

    const StateSet& initials() const { return initials_; }
    const StateSet& secrets() const { return secrets_; }
    void set_initial(std::size_t x) { initials_.set(x); }
    void set_secret(std::size_t x) { secrets_.set(x); }
    bool is_secret(std::size_t x) const { return secrets_.test(x); }

    StateSet nonsecrets() const {
        StateSet ns(state_count());
        for (std::size_t x = 0; x < state_count(); ++x)
            if (!secrets_.test(x)) ns.set(x);
        return ns;
    }

    StateSet empty_set() const { return StateSet(state_count()); }

    bool operator==(const Automaton& o) const {
        return states_ == o.states_ && alphabet_ == o.alphabet_ && delta_ == o.delta_ &&
               initials_ == o.initials_ && secrets_ == o.secrets_;
    }

private:
    std::vector<std::string> states_;    // sorted
    EventAlphabet alphabet_;
    std::vector<StateSet> delta_;        // [x * |events| + e]
    StateSet initials_;
    StateSet secrets_;
};

// A run fixes the intermediate states, unlike an event sequence.
struct Run {
    std::size_t start = 0;
    std::vector<std::pair<std::size_t, std::size_t>> steps;  // (event, next state)
};

inline bool is_valid_run(const Automaton& aut, const Run& r) {
    if (r.start >= aut.state_count()) return false;
    std::size_t cur = r.start;
    for (auto [e, nxt] : r.steps) {
        if (e >= aut.alphabet().size() || nxt >= aut.state_count()) return false;
        if (!aut.delta(cur, e).test(nxt)) return false;
        cur = nxt;
    }
    return true;
}

// True iff every state of the run, start and end included, is non-secret.
inline bool is_nonsecret_run(const Automaton& aut, const Run& r) {
    if (!is_valid_run(aut, r)) throw UsageError("invalid run");
    if (aut.is_secret(r.start)) return false;
    for (auto [e, nxt] : r.steps) {
        (void)e;
        if (aut.is_secret(nxt)) return false;
    }
    return true;
}

inline StateSet step(const Automaton& aut, std::size_t x, std::size_t e) {
    if (x >= aut.state_count()) throw UsageError("state index out of range");
    if (e >= aut.alphabet().size()) throw UsageError("event index out of range");
    return aut.delta(x, e);
}

inline StateSet step(const Automaton& aut, std::string_view state, std::string_view event) {
    return step(aut, aut.state_index_checked(state), aut.alphabet().index_checked(event));
}

// Iterated image: the set of states reachable from `source` under the exact
// event sequence s. execute(aut, S, {}) == S.
inline StateSet execute(const Automaton& aut, const StateSet& source,
                        const std::vector<std::size_t>& s) {
    StateSet cur = source;
    for (std::size_t e : s) {
        if (e >= aut.alphabet().size()) throw UsageError("event index out of range");
        StateSet nxt(aut.state_count());
        cur.for_each([&](std::size_t x) { nxt |= aut.delta(x, e); });
        cur = nxt;
    }
    return cur;
}

inline std::vector<std::size_t> event_indices(const EventAlphabet& alphabet,
                                              const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(alphabet.index_checked(n));
    return out;
}

inline StateSet execute(const Automaton& aut, const StateSet& source,
                        const std::vector<std::string>& s) {
    return execute(aut, source, event_indices(aut.alphabet(), s));
}

// Natural projection: erase unobservable symbols, keep order.
inline std::vector<std::size_t> project(const std::vector<std::size_t>& s,
                                        const EventAlphabet& alphabet) {
    std::vector<std::size_t> out;
    for (std::size_t e : s) {
        if (e >= alphabet.size()) throw UsageError("event index out of range");
        if (alphabet.observable(e)) out.push_back(e);
    }
    return out;
}

inline std::vector<std::string> project(const std::vector<std::string>& s,
                                        const EventAlphabet& alphabet) {
    std::vector<std::string> out;
    for (const auto& name : s)
        if (alphabet.observable(alphabet.index_checked(name))) out.push_back(name);
    return out;
}

// Restriction of aut to the states reachable from `roots` under any events.
// The initial set of the result is `roots` (restricted states keep their
// names, secret marks survive).
inline Automaton accessible_part(const Automaton& aut, const StateSet& roots) {
    const std::size_t n = aut.state_count();
    StateSet reach = roots;
    std::vector<std::size_t> work = roots.members();
    while (!work.empty()) {
        std::size_t x = work.back();
        work.pop_back();
        for (std::size_t e = 0; e < aut.alphabet().size(); ++e) {
            aut.delta(x, e).for_each([&](std::size_t y) {
                if (!reach.test(y)) {
                    reach.set(y);
                    work.push_back(y);
                }
            });
        }
    }
    std::vector<std::string> kept;
    kept.reserve(reach.count());
    for (std::size_t x = 0; x < n; ++x)
        if (reach.test(x)) kept.push_back(aut.state_name(x));

    Automaton out(kept, aut.alphabet());
    for (std::size_t x = 0; x < n; ++x) {
        if (!reach.test(x)) continue;
        std::size_t nx = *out.state_index(aut.state_name(x));
        if (roots.test(x)) out.set_initial(nx);
        if (aut.is_secret(x)) out.set_secret(nx);
        for (std::size_t e = 0; e < aut.alphabet().size(); ++e)
            aut.delta(x, e).for_each([&](std::size_t y) {
                out.add_transition(nx, e, *out.state_index(aut.state_name(y)));
            });
    }
    return out;
}

inline Automaton accessible_part(const Automaton& aut) {
    return accessible_part(aut, aut.initials());
}

// ---------------------------------------------------------------------------
// .aut text format
//
//   states: <id> <id> ...
//   initial: <id> ...
//   secret: <id> ...
//   observable: <id> ...
//   unobservable: <id> ...
//   trans: <src> <event> <dst>
//
// Line oriented, '#' starts a comment, sections in any order.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) toks.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

} // namespace detail

inline Automaton parse_automaton(std::string_view text) {
    using Entry = std::pair<std::string, std::size_t>;  // (identifier, line)
    std::vector<std::string> states, observables, unobservables;
    std::vector<Entry> initials, secrets;
    std::vector<std::array<std::string, 3>> transitions;
    std::vector<std::size_t> transition_lines;

    std::map<std::string, std::size_t> state_decl_line;
    std::map<std::string, std::size_t> event_decl_line;

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;

        const std::string& key = toks[0];
        std::vector<std::string> args(toks.begin() + 1, toks.end());

        if (key == "states:") {
            for (auto& s : args) {
                if (!state_decl_line.emplace(s, lineno).second)
                    throw ParseError(lineno, "duplicate state \"" + s + "\"");
                states.push_back(s);
            }
        } else if (key == "initial:") {
            for (auto& s : args) initials.emplace_back(s, lineno);
        } else if (key == "secret:") {
            for (auto& s : args) secrets.emplace_back(s, lineno);
        } else if (key == "observable:" || key == "unobservable:") {
            for (auto& e : args) {
                if (!event_decl_line.emplace(e, lineno).second)
                    throw ParseError(lineno, "duplicate event \"" + e + "\"");
                (key == "observable:" ? observables : unobservables).push_back(e);
            }
        } else if (key == "trans:") {
            if (args.size() != 3)
                throw ParseError(lineno, "trans expects \"<src> <event> <dst>\"");
            transitions.push_back({args[0], args[1], args[2]});
            transition_lines.push_back(lineno);
        } else {
            throw ParseError(lineno, "unknown section \"" + key + "\"");
        }
        if (eol == text.size()) break;
    }

    if (states.empty()) throw ParseError(lineno, "empty state set");
    if (initials.empty()) throw ParseError(lineno, "empty initial set");

    std::vector<std::string> event_names;
    std::vector<bool> obs_flags;
    for (auto& e : observables) {
        event_names.push_back(e);
        obs_flags.push_back(true);
    }
    for (auto& e : unobservables) {
        event_names.push_back(e);
        obs_flags.push_back(false);
    }

    Automaton aut(states, EventAlphabet(std::move(event_names), std::move(obs_flags)));

    auto state_at = [&](const std::string& name, std::size_t line) {
        auto i = aut.state_index(name);
        if (!i) throw ParseError(line, "undeclared state \"" + name + "\"");
        return *i;
    };
    for (const auto& [s, line] : initials) aut.set_initial(state_at(s, line));
    for (const auto& [s, line] : secrets) aut.set_secret(state_at(s, line));
    for (std::size_t t = 0; t < transitions.size(); ++t) {
        const auto& [src, ev, dst] = transitions[t];
        std::size_t line = transition_lines[t];
        auto e = aut.alphabet().index(ev);
        if (!e) throw ParseError(line, "undeclared event \"" + ev + "\"");
        aut.add_transition(state_at(src, line), *e, state_at(dst, line));
    }
    return aut;
}

// Canonical form: sections in fixed order, identifiers sorted.
inline std::string serialize(const Automaton& aut) {
    std::ostringstream out;
    auto emit_states = [&](const char* section, const StateSet& set) {
        out << section;
        set.for_each([&](std::size_t x) { out << ' ' << aut.state_name(x); });
        out << '\n';
    };
    out << "states:";
    for (std::size_t x = 0; x < aut.state_count(); ++x) out << ' ' << aut.state_name(x);
    out << '\n';
    emit_states("initial:", aut.initials());
    emit_states("secret:", aut.secrets());
    out << "observable:";
    for (std::size_t e : aut.alphabet().observable_events()) out << ' ' << aut.alphabet().name(e);
    out << '\n';
    out << "unobservable:";
    for (std::size_t e : aut.alphabet().unobservable_events()) out << ' ' << aut.alphabet().name(e);
    out << '\n';
    for (std::size_t x = 0; x < aut.state_count(); ++x)
        for (std::size_t e = 0; e < aut.alphabet().size(); ++e)
            aut.delta(x, e).for_each([&](std::size_t y) {
                out << "trans: " << aut.state_name(x) << ' ' << aut.alphabet().name(e) << ' '
                    << aut.state_name(y) << '\n';
            });
    return out.str();
}

} // namespace ksso
