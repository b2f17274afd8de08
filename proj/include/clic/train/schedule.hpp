#pragma once

#include <cstddef>

namespace clic {

struct LrSchedule {
    double lr_start = 1e-7;
    double lr_peak = 1e-6;
    double lr_end = 1e-8;
    double warmup_frac = 0.2;
    std::size_t total_steps = 0;
};

// Linear ramp lr_start -> lr_peak over the first ceil(warmup_frac * T)
// steps, then cosine decay lr_peak -> lr_end at step T. Throws
// StepOutOfRange outside [0, T].
double lr_at(std::size_t step, const LrSchedule& s);

std::size_t warmup_end_step(const LrSchedule& s);

} // namespace clic
