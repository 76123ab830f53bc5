#pragma once

#include <string>
#include <string_view>

#include "automaton.hpp"
#include "composition.hpp"
#include "observer.hpp"
#include "subautomata.hpp"

namespace ksso {

namespace detail {

inline std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

// "{x,y,z}" with member names in state-index order.
inline std::string belief_label(const StateSet& belief, const Automaton& src) {
    std::string out = "{";
    bool first = true;
    belief.for_each([&](std::size_t x) {
        if (!first) out += ',';
        out += src.state_name(x);
        first = false;
    });
    out += '}';
    return out;
}

// States in index order, one edge per transition, initial states marked by an
// incoming arrowless edge, secret states filled. Output is deterministic.
inline std::string dot_automaton(const Automaton& g, std::string_view graph_name) {
    std::string out = "digraph " + std::string(graph_name) + " {\n  rankdir=LR;\n  node [shape=circle];\n";
    std::size_t mark = 0;
    g.initials().for_each([&](std::size_t) {
        out += "  __i" + std::to_string(mark++) + " [shape=none, label=\"\"];\n";
    });
    for (std::size_t x = 0; x < g.state_count(); ++x) {
        out += "  " + detail::dot_quote(g.state_name(x));
        if (g.is_secret(x)) out += " [style=filled]";
        out += ";\n";
    }
    mark = 0;
    g.initials().for_each([&](std::size_t x) {
        out += "  __i" + std::to_string(mark++) + " -> " + detail::dot_quote(g.state_name(x)) + ";\n";
    });
    for (std::size_t x = 0; x < g.state_count(); ++x)
        for (std::size_t e = 0; e < g.alphabet().size(); ++e)
            g.delta(x, e).for_each([&](std::size_t y) {
                out += "  " + detail::dot_quote(g.state_name(x)) + " -> " +
                       detail::dot_quote(g.state_name(y)) + " [label=" +
                       detail::dot_quote(g.alphabet().name(e)) + "];\n";
            });
    out += "}\n";
    return out;
}

// Beliefs in discovery order labeled "{..}", roots marked by incoming
// arrowless edges, edges labeled with the observable event.
inline std::string dot_observer(const ObserverAutomaton& obs, const Automaton& src,
                                std::string_view graph_name) {
    std::string out = "digraph " + std::string(graph_name) + " {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (std::size_t r = 0; r < obs.roots.size(); ++r)
        out += "  __r" + std::to_string(r) + " [shape=none, label=\"\"];\n";
    for (std::size_t b = 0; b < obs.belief_count(); ++b)
        out += "  " + detail::dot_quote(belief_label(obs.beliefs[b], src)) + ";\n";
    for (std::size_t r = 0; r < obs.roots.size(); ++r)
        out += "  __r" + std::to_string(r) + " -> " +
               detail::dot_quote(belief_label(obs.beliefs[obs.roots[r]], src)) + ";\n";
    for (std::size_t b = 0; b < obs.belief_count(); ++b)
        for (std::size_t k = 0; k < obs.obs_events.size(); ++k) {
            std::size_t t = obs.successor(b, k);
            if (t == ObserverAutomaton::nil) continue;
            out += "  " + detail::dot_quote(belief_label(obs.beliefs[b], src)) + " -> " +
                   detail::dot_quote(belief_label(obs.beliefs[t], src)) + " [label=" +
                   detail::dot_quote(src.alphabet().name(obs.obs_events[k])) + "];\n";
        }
    out += "}\n";
    return out;
}

// Composition states labeled "(x, {..})" with the DEAD right component as
// "(x, ∅)"; edges labeled "(σ,σ)" or "(σ,ε)".
inline std::string dot_composition(const CcAutomaton& cc, const InitialSecretSub& ghat,
                                   const ObserverAutomaton& gtilde_obs,
                                   const NonSecretSub& gtilde, std::string_view graph_name) {
    const EventAlphabet& alphabet = ghat.automaton.alphabet();
    auto label = [&](std::size_t s) {
        return detail::dot_quote(cc_state_label(cc.states[s], ghat, gtilde_obs, gtilde));
    };
    std::string out = "digraph " + std::string(graph_name) + " {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < cc.initials.size(); ++i)
        out += "  __i" + std::to_string(i) + " [shape=none, label=\"\"];\n";
    for (std::size_t s = 0; s < cc.state_count(); ++s) {
        out += "  " + label(s);
        if (cc.states[s].is_dead()) out += " [style=filled]";
        out += ";\n";
    }
    for (std::size_t i = 0; i < cc.initials.size(); ++i)
        out += "  __i" + std::to_string(i) + " -> " + label(cc.initials[i]) + ";\n";
    for (std::size_t s = 0; s < cc.state_count(); ++s)
        for (std::size_t e = 0; e < cc.event_count; ++e)
            for (std::size_t t : cc.trans[s][e]) {
                const std::string& name = alphabet.name(e);
                std::string edge = "(" + name + "," + (cc.observable[e] ? name : "ε") + ")";
                out += "  " + label(s) + " -> " + label(t) + " [label=" + detail::dot_quote(edge) +
                       "];\n";
            }
    out += "}\n";
    return out;
}

} // namespace ksso
