#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <unordered_map>
#include <vector>

#include "automaton.hpp"
#include "bitset.hpp"

namespace ksso {

// Deterministic subset-construction automaton over belief states. Beliefs are
// nonempty subsets of the source automaton's states; undefined transitions
// are absent entries, never empty beliefs. `beliefs` is in discovery order
// (roots first, then breadth-first), which fixes all downstream output
// ordering.
struct ObserverAutomaton {
    static constexpr std::size_t nil = static_cast<std::size_t>(-1);

    std::vector<StateSet> beliefs;
    std::vector<std::size_t> roots;       // indices into beliefs
    std::vector<std::size_t> obs_events;  // source-alphabet indices, sorted
    std::vector<std::size_t> trans;       // [belief * |obs_events| + k] -> belief or nil
    std::size_t source_states = 0;

    std::size_t belief_count() const { return beliefs.size(); }

    std::size_t successor(std::size_t belief, std::size_t k) const {
        return trans[belief * obs_events.size() + k];
    }

    std::optional<std::size_t> find_belief(const StateSet& s) const {
        for (std::size_t b = 0; b < beliefs.size(); ++b)
            if (beliefs[b] == s) return b;
        return std::nullopt;
    }
};

// Least fixpoint of S under images of unobservable events; always contains S.
inline StateSet unobservable_closure(const Automaton& aut, const StateSet& s) {
    StateSet out = s;
    std::vector<std::size_t> work = s.members();
    auto uo = aut.alphabet().unobservable_events();
    while (!work.empty()) {
        std::size_t x = work.back();
        work.pop_back();
        for (std::size_t e : uo)
            aut.delta(x, e).for_each([&](std::size_t y) {
                if (!out.test(y)) {
                    out.set(y);
                    work.push_back(y);
                }
            });
    }
    return out;
}

namespace detail {

// Successor rule shared by both observer variants: observable event first,
// then any unobservable tail.
inline StateSet observer_successor(const Automaton& aut, const StateSet& belief,
                                   std::size_t event) {
    StateSet img(aut.state_count());
    belief.for_each([&](std::size_t x) { img |= aut.delta(x, event); });
    if (img.none()) return img;
    return unobservable_closure(aut, img);
}

inline ObserverAutomaton determinize(const Automaton& aut, std::vector<StateSet> root_sets) {
    // equal roots collapse to one belief
    std::sort(root_sets.begin(), root_sets.end());
    root_sets.erase(std::unique(root_sets.begin(), root_sets.end()), root_sets.end());

    ObserverAutomaton obs;
    obs.source_states = aut.state_count();
    obs.obs_events = aut.alphabet().observable_events();

    std::unordered_map<StateSet, std::size_t, StateSetHash> index;
    std::deque<std::size_t> work;
    auto intern = [&](const StateSet& s) {
        auto [it, inserted] = index.emplace(s, obs.beliefs.size());
        if (inserted) {
            obs.beliefs.push_back(s);
            work.push_back(it->second);
        }
        return it->second;
    };
    for (const auto& r : root_sets) obs.roots.push_back(intern(r));

    while (!work.empty()) {
        std::size_t b = work.front();
        work.pop_front();
        for (std::size_t k = 0; k < obs.obs_events.size(); ++k) {
            StateSet succ = observer_successor(aut, obs.beliefs[b], obs.obs_events[k]);
            std::size_t target = succ.none() ? ObserverAutomaton::nil : intern(succ);
            // beliefs vector may have grown; trans is resized lazily below
            if (obs.trans.size() < obs.beliefs.size() * obs.obs_events.size())
                obs.trans.resize(obs.beliefs.size() * obs.obs_events.size(),
                                 ObserverAutomaton::nil);
            obs.trans[b * obs.obs_events.size() + k] = target;
        }
    }
    obs.trans.resize(obs.beliefs.size() * obs.obs_events.size(), ObserverAutomaton::nil);
    return obs;
}

} // namespace detail

// Standard observer Obs(G): single root = unobservable closure of the
// initial states.
inline ObserverAutomaton build_observer(const Automaton& aut) {
    std::vector<StateSet> roots;
    StateSet r = unobservable_closure(aut, aut.initials());
    if (r.any()) roots.push_back(r);
    return detail::determinize(aut, std::move(roots));
}

// Observer variant differing only in its root set. Roots are used as given
// (no closure is applied to them); an empty root list yields an empty
// observer.
inline ObserverAutomaton build_multi_root_observer(const Automaton& aut,
                                                   std::vector<StateSet> roots) {
    for (const auto& r : roots)
        if (r.none()) throw UsageError("observer roots must be nonempty");
    return detail::determinize(aut, std::move(roots));
}

enum class BeliefClass { secret, nonsecret, hybrid };

// X_obs split by the secret marking: entirely-secret beliefs, entirely
// non-secret beliefs, and beliefs containing both kinds.
struct BeliefPartition {
    std::vector<BeliefClass> klass;       // by belief index
    std::vector<std::size_t> secret;
    std::vector<std::size_t> nonsecret;
    std::vector<std::size_t> hybrid;
};

inline BeliefPartition classify_beliefs(const ObserverAutomaton& obs, const StateSet& secrets) {
    BeliefPartition part;
    part.klass.reserve(obs.beliefs.size());
    for (std::size_t b = 0; b < obs.beliefs.size(); ++b) {
        const StateSet& q = obs.beliefs[b];
        BeliefClass c;
        if (q.is_subset_of(secrets))
            c = BeliefClass::secret;
        else if (!q.intersects(secrets))
            c = BeliefClass::nonsecret;
        else
            c = BeliefClass::hybrid;
        part.klass.push_back(c);
        (c == BeliefClass::secret ? part.secret
         : c == BeliefClass::nonsecret ? part.nonsecret
                                       : part.hybrid)
            .push_back(b);
    }
    return part;
}

// Shortest observation reaching each belief; breadth-first from the roots,
// events in sorted order, so the result is reproducible. Entries for
// unreached beliefs stay empty (roots are reached by the empty observation).
inline std::vector<std::vector<std::size_t>> shortest_observations(const ObserverAutomaton& obs) {
    std::vector<std::vector<std::size_t>> alpha(obs.belief_count());
    std::vector<bool> seen(obs.belief_count(), false);
    std::deque<std::size_t> work;
    for (std::size_t r : obs.roots) {
        if (!seen[r]) {
            seen[r] = true;
            work.push_back(r);
        }
    }
    while (!work.empty()) {
        std::size_t b = work.front();
        work.pop_front();
        for (std::size_t k = 0; k < obs.obs_events.size(); ++k) {
            std::size_t t = obs.successor(b, k);
            if (t != ObserverAutomaton::nil && !seen[t]) {
                seen[t] = true;
                alpha[t] = alpha[b];
                alpha[t].push_back(obs.obs_events[k]);
                work.push_back(t);
            }
        }
    }
    return alpha;
}

} // namespace ksso
