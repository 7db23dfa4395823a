#pragma once

// Conversions between spherical tumor volume (mL == cm^3) and diameter (cm).

namespace tumorage {

struct Diameter {
  double cm;
};

struct Volume {
  double ml;
};

/// Volume of a sphere of diameter `d`, (pi/6) d^3. Throws DomainError unless d > 0 and finite.
Volume diameter_to_volume(Diameter d);

/// Inverse of diameter_to_volume, (6 v / pi)^(1/3).
Diameter volume_to_diameter(Volume v);

// Raw-double shorthands.
Volume volume_of(double diameter_cm);
Diameter diameter_of(double volume_ml);

}  // namespace tumorage
