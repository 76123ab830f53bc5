#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "automaton.hpp"
#include "verifier.hpp"

namespace ksso {

// Brute-force reference checker. It never looks at the composition; it
// decides opacity by enumerating observations and secret continuations
// directly, so it can certify the structural algorithm on small inputs.
struct OracleConfig {
    static constexpr std::uint64_t automatic = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t max_obs_len = automatic;    // automatic: 2^|X|, which always converges
    std::uint64_t max_total_len = automatic;  // cap on |alpha| + |beta|; automatic: none
    std::uint64_t seed = 0;
    unsigned repetition_allowance = 0;  // extra per-state visits inside an unobservable segment
};

namespace odetail {

// Enumerates unobservable paths one by one; each state may occur at most
// 1 + allow times on a path (cutting a cycle never loses an endpoint, so
// allow = 0 already reaches everything). Optionally confined to a state set.
class SegmentWalker {
public:
    SegmentWalker(const Automaton& g, unsigned allow, const StateSet* confine)
        : g_(g), allow_(allow), confine_(confine), memo_(g.state_count()),
          have_(g.state_count(), false) {}

    const StateSet& from(std::size_t x) {
        if (!have_[x]) {
            StateSet out(g_.state_count());
            std::vector<unsigned> counts(g_.state_count(), 0);
            counts[x] = 1;
            walk(x, counts, out);
            memo_[x] = std::move(out);
            have_[x] = true;
        }
        return memo_[x];
    }

    StateSet closure(const StateSet& s) {
        StateSet out(g_.state_count());
        s.for_each([&](std::size_t x) {
            if (!confine_ || confine_->test(x)) out |= from(x);
        });
        return out;
    }

private:
    void walk(std::size_t x, std::vector<unsigned>& counts, StateSet& out) {
        out.set(x);
        for (std::size_t e : g_.alphabet().unobservable_events()) {
            g_.delta(x, e).for_each([&](std::size_t y) {
                if (confine_ && !confine_->test(y)) return;
                if (counts[y] > allow_) return;
                ++counts[y];
                walk(y, counts, out);
                --counts[y];
            });
        }
    }

    const Automaton& g_;
    unsigned allow_;
    const StateSet* confine_;
    std::vector<StateSet> memo_;
    std::vector<bool> have_;
};

// Belief evolution (any states) and cover evolution (runs confined to
// non-secret states) under one observable event plus unobservable tails.
class Semantics {
public:
    explicit Semantics(const Automaton& g, unsigned allow)
        : g_(g), nonsecret_(g.nonsecrets()), free_(g, allow, nullptr),
          cover_(g, allow, &nonsecret_) {}

    StateSet initial_belief() { return free_.closure(g_.initials()); }

    StateSet from_state(std::size_t x) {
        StateSet s(g_.state_count());
        s.set(x);
        return free_.closure(s);
    }

    StateSet belief_step(const StateSet& b, std::size_t e) {
        return free_.closure(image(b, e));
    }

    StateSet cover_start(const StateSet& belief) {
        return cover_.closure(belief & nonsecret_);
    }

    StateSet cover_step(const StateSet& s, std::size_t e) {
        return cover_.closure(image(s, e) & nonsecret_);
    }

private:
    StateSet image(const StateSet& s, std::size_t e) const {
        StateSet hit(g_.state_count());
        s.for_each([&](std::size_t x) { hit |= g_.delta(x, e); });
        return hit;
    }

    const Automaton& g_;
    StateSet nonsecret_;
    SegmentWalker free_;
    SegmentWalker cover_;
};

// Looks for a continuation observation beta, |beta| <= cap, realizable from
// the secret state but admitting no cover: no non-secret member of the
// belief has a run confined to non-secret states with projection beta.
// The pair (reachable set, cover set) determines everything downstream, so
// the search dedups on pairs; BFS order makes the found beta shortest.
// `soft_cap` marks caps below the requested K; hitting one with live,
// unseen successors sets *truncated.
inline std::optional<std::vector<std::size_t>> beta_search(Semantics& sem,
                                                           const EventAlphabet& alphabet,
                                                           const StateSet& belief,
                                                           std::size_t secret_state,
                                                           std::uint64_t cap, bool soft_cap,
                                                           bool* truncated) {
    struct Node {
        StateSet run, cover;
        std::vector<std::size_t> beta;
    };
    const std::vector<std::size_t> obs = alphabet.observable_events();
    std::set<std::pair<StateSet, StateSet>> seen;
    std::deque<Node> queue;
    std::optional<std::vector<std::size_t>> found;

    auto push = [&](StateSet run, StateSet cover, std::vector<std::size_t> beta) {
        if (run.none()) return false;  // beta not realizable from the secret state
        if (!seen.insert({run, cover}).second) return false;
        if (cover.none()) {
            found = std::move(beta);
            return true;
        }
        queue.push_back({std::move(run), std::move(cover), std::move(beta)});
        return false;
    };

    if (push(sem.from_state(secret_state), sem.cover_start(belief), {})) return found;
    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();
        if (n.beta.size() == cap) {
            if (soft_cap && !*truncated) {
                for (std::size_t e : obs) {
                    StateSet run = sem.belief_step(n.run, e);
                    if (run.any() && !seen.count({run, sem.cover_step(n.cover, e)})) {
                        *truncated = true;
                        break;
                    }
                }
            }
            continue;
        }
        for (std::size_t e : obs) {
            std::vector<std::size_t> beta = n.beta;
            beta.push_back(e);
            if (push(sem.belief_step(n.run, e), sem.cover_step(n.cover, e), std::move(beta)))
                return found;
        }
    }
    return found;
}

inline Verdict oracle_check(const Automaton& g, Property property, std::uint64_t k,
                            const OracleConfig& cfg) {
    detail::Stopwatch timer;
    Verdict v;
    v.property = property;
    if (property != Property::inf_sso) v.k = k;
    v.size_states = g.state_count();

    Semantics sem(g, cfg.repetition_allowance);
    const std::uint64_t obs_cap =
        cfg.max_obs_len != OracleConfig::automatic ? cfg.max_obs_len
        : g.state_count() < 64 ? (std::uint64_t{1} << g.state_count())
                               : OracleConfig::automatic;
    const std::vector<std::size_t> obs = g.alphabet().observable_events();
    bool truncated = false;

    struct Node {
        StateSet belief;
        std::vector<std::size_t> alpha;
    };
    std::set<StateSet> seen;
    std::deque<Node> queue;
    StateSet b0 = sem.initial_belief();
    seen.insert(b0);
    queue.push_back({std::move(b0), {}});

    std::optional<Witness> witness;
    while (!queue.empty() && !witness) {
        Node n = std::move(queue.front());
        queue.pop_front();

        (n.belief & g.secrets()).for_each([&](std::size_t xs) {
            if (witness) return;
            std::uint64_t cap = k;
            bool soft = false;
            if (cfg.max_total_len != OracleConfig::automatic) {
                const std::uint64_t remain = cfg.max_total_len > n.alpha.size()
                                                 ? cfg.max_total_len - n.alpha.size()
                                                 : 0;
                if (remain < cap) {
                    cap = remain;
                    soft = true;
                }
            }
            auto beta = beta_search(sem, g.alphabet(), n.belief, xs, cap, soft, &truncated);
            if (!beta) return;
            Witness w;
            w.alpha = detail::event_names(g.alphabet(), n.alpha);
            w.secret_state = g.state_name(xs);
            w.beta = detail::event_names(g.alphabet(), *beta);
            w.observable_depth = beta->size();
            witness = std::move(w);
        });
        if (witness) break;

        const bool at_cap = n.alpha.size() >= obs_cap;
        for (std::size_t e : obs) {
            StateSet b = sem.belief_step(n.belief, e);
            if (b.none() || seen.count(b)) continue;
            if (at_cap) {
                truncated = true;
                break;
            }
            seen.insert(b);
            queue.push_back({std::move(b), [&] {
                                 auto a = n.alpha;
                                 a.push_back(e);
                                 return a;
                             }()});
        }
    }

    v.opaque = !witness.has_value();
    v.witness = std::move(witness);
    v.size_observer = seen.size();
    v.mode = truncated ? "bounded" : "exact";
    v.elapsed_ms = timer.elapsed_ms();
    return v;
}

} // namespace odetail

inline Verdict oracle_k_sso(const Automaton& g, std::uint64_t k, const OracleConfig& cfg = {}) {
    return odetail::oracle_check(g, k == 0 ? Property::zero_sso : Property::k_sso, k, cfg);
}

inline Verdict oracle_inf_sso(const Automaton& g, const OracleConfig& cfg = {}) {
    return odetail::oracle_check(g, Property::inf_sso, unbounded_depth, cfg);
}

// Belief of an observation by the oracle's own enumeration, for cross-checks
// against the observer.
inline StateSet oracle_belief(const Automaton& g, const std::vector<std::string>& alpha,
                              const OracleConfig& cfg = {}) {
    odetail::Semantics sem(g, cfg.repetition_allowance);
    StateSet b = sem.initial_belief();
    for (const std::string& name : alpha)
        b = sem.belief_step(b, g.alphabet().index_checked(name));
    return b;
}

// True when some non-secret member of belief(alpha) admits a run confined to
// non-secret states with projection beta.
inline bool oracle_has_nonsecret_cover(const Automaton& g,
                                       const std::vector<std::string>& alpha,
                                       const std::vector<std::string>& beta,
                                       const OracleConfig& cfg = {}) {
    odetail::Semantics sem(g, cfg.repetition_allowance);
    StateSet b = sem.initial_belief();
    for (const std::string& name : alpha)
        b = sem.belief_step(b, g.alphabet().index_checked(name));
    StateSet cover = sem.cover_start(b);
    for (const std::string& name : beta)
        cover = sem.cover_step(cover, g.alphabet().index_checked(name));
    return cover.any();
}

// ---------------------------------------------------------------------------
// Seeded random instances
// ---------------------------------------------------------------------------

struct GeneratorParams {
    std::size_t n_states = 4;
    std::size_t n_obs_events = 2;
    std::size_t n_unobs_events = 1;
    double transition_density = 0.3;
    double secret_fraction = 0.25;
    std::uint64_t seed = 0;
};

// Deterministic function of the seed on every platform: raw mt19937_64
// draws reduced modulo a fixed base, no distribution adapters.
inline Automaton random_automaton(const GeneratorParams& p) {
    if (p.n_states == 0) throw UsageError("generator needs at least one state");
    if (p.transition_density < 0.0 || p.transition_density > 1.0 ||
        p.secret_fraction < 0.0 || p.secret_fraction > 1.0)
        throw UsageError("generator fractions must lie in [0, 1]");
    if (p.n_obs_events > 16 || p.n_unobs_events > 6)
        throw UsageError("generator supports at most 16 observable and 6 unobservable events");

    std::vector<std::string> states;
    for (std::size_t i = 0; i < p.n_states; ++i) states.push_back(std::to_string(i));
    std::vector<std::string> events;
    std::vector<bool> observable;
    for (std::size_t i = 0; i < p.n_obs_events; ++i) {
        events.push_back(std::string(1, static_cast<char>('a' + i)));
        observable.push_back(true);
    }
    for (std::size_t i = 0; i < p.n_unobs_events; ++i) {
        events.push_back(std::string(1, static_cast<char>('u' + i)));
        observable.push_back(false);
    }

    Automaton full(states, EventAlphabet(std::move(events), std::move(observable)));
    std::mt19937_64 rng(p.seed);
    constexpr std::uint64_t base = 10000;
    const auto threshold = [](double fraction) {
        return static_cast<std::uint64_t>(fraction * 10000.0 + 0.5);
    };
    const std::uint64_t t_trans = threshold(p.transition_density);
    for (std::size_t x = 0; x < full.state_count(); ++x)
        for (std::size_t e = 0; e < full.alphabet().size(); ++e)
            for (std::size_t y = 0; y < full.state_count(); ++y)
                if (rng() % base < t_trans) full.add_transition(x, e, y);
    full.set_initial(full.state_index_checked("0"));

    Automaton acc = accessible_part(full, full.initials());
    const std::uint64_t t_secret = threshold(p.secret_fraction);
    for (std::size_t x = 0; x < acc.state_count(); ++x)
        if (rng() % base < t_secret) acc.set_secret(x);
    return acc;
}

} // namespace ksso
