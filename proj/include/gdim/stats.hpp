#ifndef GDIM_STATS_HPP
#define GDIM_STATS_HPP

#include <vector>

namespace gdim {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Welch's unequal-variance two-sample t-test with Welch-Satterthwaite
// degrees of freedom. Each sample needs at least two observations.
WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b);

// Regularized incomplete beta function I_x(a, b), continued-fraction form.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

// Median with the even-count mean-of-middle-two convention.
double median(std::vector<double> values);

}  // namespace gdim

#endif  // GDIM_STATS_HPP
