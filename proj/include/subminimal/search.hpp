#pragma once

// Bounded countermodel search over all frames of a logic.

#include <chrono>
#include <optional>
#include <stdexcept>

#include "enumerate.hpp"
#include "frames.hpp"

namespace subminimal {

class resource_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct search_limits {
    std::optional<std::chrono::steady_clock::time_point> deadline;

    static search_limits with_timeout(std::chrono::milliseconds ms)
    {
        return {std::chrono::steady_clock::now() + ms};
    }

    void check() const
    {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw resource_exhausted("search deadline exceeded");
    }
};

struct countermodel {
    nmodel model;
    int world;
};

// Searches frames of logic l by world count, then by order relation bits,
// then by N-table, and valuations in lexicographic upset order. The first hit
// is therefore the least witness in that order.
inline std::optional<countermodel> countermodel_search(logic l, const formula& f, int max_worlds,
                                                       const search_limits& limits = {})
{
    if (max_worlds < 1)
        throw std::invalid_argument("max_worlds must be at least 1");
    if (max_worlds > 5)
        throw resource_exhausted("countermodel search is limited to 5 worlds");
    std::optional<countermodel> found;
    for (int k = 1; k <= max_worlds && !found; ++k) {
        for_each_labelled_poset(k, [&](const poset& p) {
            limits.check();
            for (const nframe& fr : enumerate_nframes(p)) {
                if (!frame_class(fr, l))
                    continue;
                if (auto r = find_refutation(fr, f)) {
                    found = countermodel{nmodel(fr, r->values), r->world};
                    return false;
                }
            }
            return true;
        });
    }
    return found;
}

// A witness is sound if the frame is a valid frame of the logic and the
// formula fails at the world.
inline bool verify_countermodel(logic l, const formula& f, const countermodel& c)
{
    if (!satisfies_locality(c.model.frame()))
        return false;
    if (!frame_class(c.model.frame(), l))
        return false;
    return !contains(eval(c.model, f), c.world);
}

} // namespace subminimal
