#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "observer.hpp"
#include "subautomata.hpp"

namespace ksso {

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State of the concurrent composition: a state of the initial-secret
// subautomaton paired with either a belief of the non-secret observer or the
// absorbing DEAD marker. DEAD records that no observation-equivalent
// non-secret continuation survives.
struct CcState {
    static constexpr std::size_t dead = static_cast<std::size_t>(-1);
    std::size_t left;   // state index in the initial-secret subautomaton
    std::size_t right;  // belief index in the non-secret observer, or dead

    bool is_dead() const { return right == dead; }
    bool operator==(const CcState& o) const { return left == o.left && right == o.right; }
    bool operator<(const CcState& o) const {
        return left != o.left ? left < o.left : right < o.right;
    }
};

// Concurrent composition of the initial-secret subautomaton and the
// non-secret observer. Events are pairs: (σ,σ) for observable σ, (σ,ε) for
// unobservable σ; only the event index and its observability are stored.
// Only the accessible part is materialized.
struct CcAutomaton {
    std::vector<CcState> states;                    // discovery order
    std::vector<std::size_t> initials;              // indices into states
    std::vector<std::size_t> initial_hybrid;        // observer belief index generating each initial
    std::vector<std::vector<std::vector<std::size_t>>> trans;  // [state][event] -> sorted targets
    std::size_t event_count = 0;
    std::vector<bool> observable;                   // by event index

    std::size_t state_count() const { return states.size(); }
};

// Builds Cc(Ĝ, G̃_obs). `hybrid` lists the hybrid beliefs of Obs(G) as pairs
// of (belief set over G's states, observer belief index); `g` is the source
// automaton the beliefs refer to. The observer must have been built with
// roots { X_NS ∩ q : q hybrid }, which is checked.
inline CcAutomaton build_concurrent_composition(const InitialSecretSub& ghat,
                                                const ObserverAutomaton& gtilde_obs,
                                                const Automaton& g,
                                                const std::vector<StateSet>& hybrid,
                                                const std::vector<std::size_t>& hybrid_index,
                                                const NonSecretSub& gtilde) {
    const Automaton& left_aut = ghat.automaton;
    const Automaton& gt = gtilde.automaton;

    if (gt.secrets().any())
        throw ConstructionError("non-secret subautomaton contains a secret state");

    // map each hybrid belief's non-secret remainder onto a root of the
    // observer; a mismatch means the observer was built for different roots
    auto roots = nonsecret_observer_roots(g, hybrid, gt);
    std::vector<std::size_t> root_belief(hybrid.size(), ObserverAutomaton::nil);
    std::vector<bool> root_used(gtilde_obs.roots.size(), false);
    for (std::size_t h = 0; h < hybrid.size(); ++h) {
        for (std::size_t r = 0; r < gtilde_obs.roots.size(); ++r) {
            if (gtilde_obs.beliefs[gtilde_obs.roots[r]] == roots[h]) {
                root_belief[h] = gtilde_obs.roots[r];
                root_used[r] = true;
                break;
            }
        }
        if (root_belief[h] == ObserverAutomaton::nil)
            throw ConstructionError("observer root set does not match the hybrid beliefs");
    }
    if (std::find(root_used.begin(), root_used.end(), false) != root_used.end())
        throw ConstructionError("observer has roots not generated by any hybrid belief");

    CcAutomaton cc;
    cc.event_count = left_aut.alphabet().size();
    for (std::size_t e = 0; e < cc.event_count; ++e)
        cc.observable.push_back(left_aut.alphabet().observable(e));

    std::map<CcState, std::size_t> index;
    std::deque<std::size_t> work;
    auto intern = [&](CcState s) {
        auto [it, inserted] = index.emplace(s, cc.states.size());
        if (inserted) {
            cc.states.push_back(s);
            cc.trans.emplace_back(cc.event_count);
            work.push_back(it->second);
        }
        return it->second;
    };

    // initials: each secret member of each hybrid belief, paired with the
    // belief's non-secret remainder
    for (std::size_t h = 0; h < hybrid.size(); ++h) {
        StateSet secret_members = hybrid[h] & g.secrets();
        secret_members.for_each([&](std::size_t x) {
            std::size_t left = left_aut.state_index_checked(g.state_name(x));
            CcState s{left, root_belief[h]};
            std::size_t idx = intern(s);
            if (std::find(cc.initials.begin(), cc.initials.end(), idx) == cc.initials.end()) {
                cc.initials.push_back(idx);
                cc.initial_hybrid.push_back(hybrid_index[h]);
            }
        });
    }

    // Ĝ and G̃ keep G's full alphabet, so event indices agree across all three
    if (!(left_aut.alphabet() == g.alphabet()) || !(gt.alphabet() == g.alphabet()))
        throw ConstructionError("subautomata must share the source alphabet");

    // position of each alphabet event in the observer's compact observable table
    std::vector<std::size_t> obs_pos(g.alphabet().size(), ObserverAutomaton::nil);
    for (std::size_t k = 0; k < gtilde_obs.obs_events.size(); ++k)
        obs_pos[gtilde_obs.obs_events[k]] = k;

    while (!work.empty()) {
        std::size_t si = work.front();
        work.pop_front();
        const CcState cur = cc.states[si];
        if (cur.is_dead()) continue;  // absorbing: the violation is already exposed
        for (std::size_t e = 0; e < cc.event_count; ++e) {
            const bool observable = left_aut.alphabet().observable(e);
            std::size_t next_right;
            if (observable) {
                std::size_t succ = gtilde_obs.successor(cur.right, obs_pos[e]);
                next_right = succ == ObserverAutomaton::nil ? CcState::dead : succ;
            } else {
                next_right = cur.right;  // unobservable moves keep the estimate
            }
            std::vector<std::size_t>& targets = cc.trans[si][e];
            left_aut.delta(cur.left, e).for_each([&](std::size_t y) {
                targets.push_back(intern(CcState{y, next_right}));
            });
            std::sort(targets.begin(), targets.end());
        }
    }
    return cc;
}

// Node label: "(x, {a,b})" or "(x, ∅)".
inline std::string cc_state_label(const CcState& s, const InitialSecretSub& ghat,
                                  const ObserverAutomaton& gtilde_obs,
                                  const NonSecretSub& gtilde) {
    std::string out = "(" + ghat.automaton.state_name(s.left) + ", ";
    if (s.is_dead()) {
        out += "∅";
    } else {
        out += "{";
        bool comma = false;
        gtilde_obs.beliefs[s.right].for_each([&](std::size_t x) {
            if (comma) out += ",";
            out += gtilde.automaton.state_name(x);
            comma = true;
        });
        out += "}";
    }
    return out + ")";
}

} // namespace ksso
