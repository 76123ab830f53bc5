#pragma once

#include <json.hpp>

#include "verifier.hpp"

namespace ksso {

inline nlohmann::ordered_json verdict_json(const Verdict& v) {
    using json = nlohmann::ordered_json;
    auto opt = [](const std::optional<std::uint64_t>& x) {
        return x ? json(*x) : json(nullptr);
    };
    json out;
    out["property"] = property_name(v.property);
    out["k"] = opt(v.k);
    out["k_normalized"] = opt(v.k_normalized);
    out["kstar"] = opt(v.kstar);
    out["opaque"] = v.opaque;
    if (v.witness) {
        const Witness& wit = *v.witness;
        json w;
        w["alpha"] = wit.alpha;
        w["secret_state"] = wit.secret_state;
        w["beta"] = wit.beta;
        if (!wit.start.empty()) w["start"] = wit.start;
        json path = json::array();
        for (const WitnessStep& s : wit.path)
            path.push_back({{"event_left", s.event_left},
                            {"event_right", s.event_right},
                            {"state", s.state}});
        w["path"] = std::move(path);
        w["observable_depth"] = wit.observable_depth;
        out["witness"] = std::move(w);
    } else {
        out["witness"] = nullptr;
    }
    out["sizes"] = {{"states", v.size_states}, {"observer", v.size_observer}, {"cc", v.size_cc}};
    out["elapsed_ms"] = v.elapsed_ms;
    if (v.mode) out["mode"] = *v.mode;
    return out;
}

} // namespace ksso
