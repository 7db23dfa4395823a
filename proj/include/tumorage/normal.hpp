#pragma once

namespace tumorage {

// Standard normal CDF, computed from erfc so the lower tail keeps full relative precision.
double normal_cdf(double x);

// Inverse standard normal CDF for u in (0, 1) (Wichura's AS241 rational approximation,
// about 1e-16 relative accuracy). Throws DomainError outside (0, 1).
double normal_quantile(double u);

}  // namespace tumorage
