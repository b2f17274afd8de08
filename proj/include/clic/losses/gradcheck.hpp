#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "clic/matrix.hpp"

namespace clic {

// Central-difference comparison of an analytic gradient. f() re-evaluates
// the scalar loss after x has been perturbed in place; x is restored.
// Relative error uses max(|analytic|, |numeric|, floor) in the denominator
// so near-zero entries are judged on an absolute scale just above the
// finite-difference noise floor.
double gradcheck_max_rel_err(const std::function<double()>& f, Matrix& x, const Matrix& analytic,
                             double h = 1e-5, double floor = 1e-4);

struct GradSuiteResult {
    std::size_t instances = 0;
    std::size_t failures = 0;
    double worst_rel_err = 0.0;
    std::string worst_case;

    bool ok(double tol = 1e-6) const { return failures == 0 && worst_rel_err < tol; }
};

// Randomized finite-difference suite over every loss in losses.hpp:
// instances_per_loss random (m, d, tau) instances per loss family with unit
// rows, every gradient argument checked entry by entry.
GradSuiteResult run_loss_gradient_suite(std::uint64_t seed, std::size_t instances_per_loss,
                                        double tol = 1e-6);

} // namespace clic
