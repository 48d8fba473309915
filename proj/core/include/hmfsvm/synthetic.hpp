#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "hmfsvm/dataprep.hpp"

namespace hmfsvm {

// Generator for garage job logs shaped like a fleet operator's export.
// Failure risk rises with age, mileage, garage visits, recurring repairs and
// heavy last jobs, mostly through threshold and interaction effects rather
// than a linear score.
struct FleetSynthConfig {
  std::size_t vehicles = 800;
  std::uint64_t seed = 0;
  Date as_of{std::chrono::year{2017}, std::chrono::month{1}, std::chrono::day{1}};
  // Share of vehicles generated outside the age or odometer filter bounds.
  double out_of_bounds_fraction = 0.05;
  // Share of job rows damaged (blank field, negative value, bad date, ...).
  double dirty_fraction = 0.02;
};

struct FleetSynthSummary {
  std::size_t vehicles = 0;
  std::size_t rows = 0;
  std::size_t dirty_rows = 0;
  std::size_t failing_vehicles = 0;
};

// Writes a job CSV using the default SchemaConfig column names.
FleetSynthSummary write_synthetic_fleet(std::ostream& out, const FleetSynthConfig& config);

}  // namespace hmfsvm
