#include "starprune/schedule.hpp"

#include <string>

namespace starprune {

void ScaleSchedule::validate() const {
    if (scales.empty())
        throw std::invalid_argument("schedule.scales: must not be empty");
    if (iterations.size() != scales.size())
        throw std::invalid_argument("schedule.iterations: size must match scales");
    if (prune_ratios.size() != scales.size())
        throw std::invalid_argument("schedule.prune_ratios: size must match scales");
    for (size_t k = 0; k < scales.size(); ++k) {
        if (scales[k].rows < 1 || scales[k].cols < 1)
            throw std::invalid_argument("schedule.scales[" + std::to_string(k) +
                                        "]: dims must be >= 1");
        if (k > 0 && (scales[k].rows < scales[k - 1].rows || scales[k].cols < scales[k - 1].cols))
            throw std::invalid_argument("schedule.scales[" + std::to_string(k) +
                                        "]: resolutions must be nondecreasing in both axes");
        if (iterations[k] < 1)
            throw std::invalid_argument("schedule.iterations[" + std::to_string(k) +
                                        "]: must be >= 1");
        if (prune_ratios[k] < 0.0 || prune_ratios[k] > 1.0)
            throw std::invalid_argument("schedule.prune_ratios[" + std::to_string(k) +
                                        "]: must be in [0, 1]");
    }
    if (warmup_scales < 0 || warmup_scales > num_scales())
        throw std::invalid_argument("schedule.warmup_scales: must be in [0, num_scales]");
    for (int k = 0; k < warmup_scales; ++k)
        if (prune_ratios[k] != 0.0)
            throw std::invalid_argument("schedule.prune_ratios[" + std::to_string(k) +
                                        "]: must be 0 inside the warmup range");
    if (channels < 1)
        throw std::invalid_argument("schedule.channels: must be >= 1");
    if (clips < 1)
        throw std::invalid_argument("schedule.clips: must be >= 1");
    if (clip_frames < 1)
        throw std::invalid_argument("schedule.clip_frames: must be >= 1");
}

long long completed_snapshots(const ScaleSchedule& s, int scale_index, int iter) {
    long long n = 0;
    for (int k = 0; k < scale_index; ++k) n += s.iterations[k];
    return n + (iter - 1);
}

bool prune_eligible(const ScaleSchedule& s, int scale_index, int iter) {
    if (scale_index < s.warmup_scales)
        return false;
    if (s.prune_ratios[scale_index] <= 0.0)
        return false;
    // last iteration of a multi-iteration scale is reserved for a full pass
    if (s.iterations[scale_index] > 1 && iter == s.iterations[scale_index])
        return false;
    // the cross-scale similarity needs two prior snapshots to compare
    if (completed_snapshots(s, scale_index, iter) < 2)
        return false;
    return true;
}

}  // namespace starprune
