#include "clic/train/schedule.hpp"

#include <cmath>
#include <numbers>

#include "clic/error.hpp"

namespace clic {

std::size_t warmup_end_step(const LrSchedule& s) {
    return static_cast<std::size_t>(
        std::ceil(s.warmup_frac * static_cast<double>(s.total_steps)));
}

double lr_at(std::size_t step, const LrSchedule& s) {
    if (step > s.total_steps) throw StepOutOfRange();
    const std::size_t warmup = warmup_end_step(s);
    if (step <= warmup) {
        if (warmup == 0) return s.lr_peak;
        const double t = static_cast<double>(step) / static_cast<double>(warmup);
        return s.lr_start + (s.lr_peak - s.lr_start) * t;
    }
    const double span = static_cast<double>(s.total_steps - warmup);
    const double t = static_cast<double>(step - warmup) / span;
    return s.lr_end + (s.lr_peak - s.lr_end) * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

} // namespace clic
