#pragma once

#include <vector>

#include "automaton.hpp"
#include "observer.hpp"

namespace ksso {

// G re-rooted at the secret states: the part of G reachable from X_S, with
// the full alphabet kept. States of the result may themselves be secret;
// this automaton tracks continuations after a secret visit, it does not
// filter secrecy.
struct InitialSecretSub {
    Automaton automaton;
    bool empty() const { return automaton.state_count() == 0; }
};

// G with every secret state (and all incident transitions) deleted, rooted
// at the non-secret members of the hybrid beliefs.
struct NonSecretSub {
    Automaton automaton;
    bool empty() const { return automaton.state_count() == 0; }
};

namespace detail {

inline Automaton empty_automaton(const EventAlphabet& alphabet) {
    Automaton out(std::vector<std::string>{}, alphabet);
    return out;
}

} // namespace detail

inline InitialSecretSub initial_secret_subautomaton(const Automaton& g) {
    if (g.secrets().none()) return {detail::empty_automaton(g.alphabet())};
    return {accessible_part(g, g.secrets())};
}

// `hybrid` holds the hybrid beliefs of Obs(g) as subsets of g's states.
inline NonSecretSub nonsecret_subautomaton(const Automaton& g,
                                           const std::vector<StateSet>& hybrid) {
    StateSet roots(g.state_count());
    const StateSet nonsecret = g.nonsecrets();
    for (const auto& q : hybrid) roots |= q & nonsecret;
    if (roots.none()) return {detail::empty_automaton(g.alphabet())};

    // delete secret states first, then restrict to the part reachable from
    // the roots
    std::vector<std::string> kept;
    for (std::size_t x = 0; x < g.state_count(); ++x)
        if (!g.is_secret(x)) kept.push_back(g.state_name(x));
    Automaton stripped(kept, g.alphabet());
    for (std::size_t x = 0; x < g.state_count(); ++x) {
        if (g.is_secret(x)) continue;
        std::size_t nx = *stripped.state_index(g.state_name(x));
        if (roots.test(x)) stripped.set_initial(nx);
        for (std::size_t e = 0; e < g.alphabet().size(); ++e)
            g.delta(x, e).for_each([&](std::size_t y) {
                if (!g.is_secret(y))
                    stripped.add_transition(nx, e, *stripped.state_index(g.state_name(y)));
            });
    }
    return {accessible_part(stripped, stripped.initials())};
}

// Roots of the non-secret observer: { X_NS ∩ q : q hybrid }, expressed over
// the non-secret subautomaton's state indices.
inline std::vector<StateSet> nonsecret_observer_roots(const Automaton& g,
                                                      const std::vector<StateSet>& hybrid,
                                                      const Automaton& gtilde) {
    std::vector<StateSet> roots;
    const StateSet nonsecret = g.nonsecrets();
    roots.reserve(hybrid.size());
    for (const auto& q : hybrid) {
        StateSet members = q & nonsecret;
        StateSet root(gtilde.state_count());
        members.for_each([&](std::size_t x) {
            root.set(gtilde.state_index_checked(g.state_name(x)));
        });
        roots.push_back(root);
    }
    return roots;
}

} // namespace ksso
