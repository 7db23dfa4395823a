#include "tumorage/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tumorage/errors.hpp"

namespace tumorage {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(x));
  }
}

}  // namespace

Volume diameter_to_volume(Diameter d) {
  require_positive(d.cm, "diameter");
  return Volume{std::numbers::pi / 6.0 * d.cm * d.cm * d.cm};
}

Volume volume_of(double diameter_cm) { return diameter_to_volume(Diameter{diameter_cm}); }

Diameter volume_to_diameter(Volume v) {
  require_positive(v.ml, "volume");
  return Diameter{std::cbrt(6.0 * v.ml / std::numbers::pi)};
}

Diameter diameter_of(double volume_ml) { return volume_to_diameter(Volume{volume_ml}); }

}  // namespace tumorage
