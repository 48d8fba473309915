#include "hmfsvm/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/parallel.hpp"

namespace hmfsvm {
namespace {

constexpr std::array<const char*, 10> kWorkAreas{
    "automatic transmission", "engine", "suspension", "audit",   "body exterior",
    "brakes",                 "electrical", "tyres",  "cooling", "service"};

// The first three are heavier repair types that tend to recur on a worn vehicle.
bool heavy_area(std::size_t k) { return k < 3; }

struct Job {
  Date date;
  double odometer;
  std::size_t area;
  double labor_hours;
  double parts_cost;
  double labor_cost;
  bool breakdown;
  int tasks;
};

std::string money(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

Date add_days(Date d, long days) {
  return Date{std::chrono::sys_days(d) + std::chrono::days(days)};
}

}  // namespace

FleetSynthSummary write_synthetic_fleet(std::ostream& out, const FleetSynthConfig& config) {
  if (config.vehicles == 0) throw ConfigError("synthetic fleet needs at least one vehicle");
  if (!(config.out_of_bounds_fraction >= 0.0 && config.out_of_bounds_fraction <= 1.0) ||
      !(config.dirty_fraction >= 0.0 && config.dirty_fraction <= 1.0)) {
    throw ConfigError("synthetic fleet fractions must lie in [0, 1]");
  }
  std::mt19937_64 rng(mix_seed(config.seed, 0x5f1ee7));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const SchemaConfig schema;
  write_csv_row(out, schema.columns());

  FleetSynthSummary summary;
  summary.vehicles = config.vehicles;
  for (std::size_t v = 0; v < config.vehicles; ++v) {
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "VH%05zu", v + 1);
    const std::string id = idbuf;

    double age = uniform(0.8, 13.5);
    double miles_per_year = std::exp(std::normal_distribution<double>(std::log(9000.0), 0.7)(rng));
    if (unit(rng) < config.out_of_bounds_fraction) {
      switch (static_cast<int>(uniform(0.0, 3.0))) {
        case 0: age = uniform(14.2, 18.0); break;
        case 1: miles_per_year = uniform(5.0, 40.0) / age; break;
        default: miles_per_year = uniform(185000.0, 230000.0) / age; break;
      }
    }
    const double total_miles = age * miles_per_year;
    const auto registered = add_days(config.as_of, -static_cast<long>(age * 365.25));

    // Older and busier vehicles see the garage more often.
    const double visit_rate = 1.0 + 0.45 * age + 0.25 * total_miles / 10000.0;
    const int visits = 1 + std::poisson_distribution<int>(visit_rate)(rng);

    std::vector<double> ages(static_cast<std::size_t>(visits));
    for (auto& t : ages) t = uniform(0.0, age);
    std::sort(ages.begin(), ages.end());

    std::vector<Job> jobs;
    std::size_t heavy_repeats = 0;
    std::array<int, kWorkAreas.size()> area_counts{};
    for (int j = 0; j < visits; ++j) {
      const double job_age = ages[static_cast<std::size_t>(j)];
      Job job;
      job.date = add_days(registered, static_cast<long>(job_age * 365.25));
      job.odometer = std::round(job_age * miles_per_year);
      const double heavy_p = 0.1 + 0.03 * job_age;
      job.area = unit(rng) < heavy_p ? static_cast<std::size_t>(uniform(0.0, 3.0))
                                     : static_cast<std::size_t>(uniform(0.0, 10.0));
      if (heavy_area(job.area) && ++area_counts[job.area] >= 2) ++heavy_repeats;
      const double heavy = heavy_area(job.area) ? 1.0 : 0.0;
      job.tasks = 1 + std::poisson_distribution<int>(1.0 + 1.5 * heavy)(rng);
      job.labor_hours = std::round(uniform(0.5, 1.5) * job.tasks * (1.0 + heavy) * 10.0) / 10.0;
      job.parts_cost = std::round(std::exp(std::normal_distribution<double>(std::log(60.0), 0.6)(rng)) *
                                  (1.0 + 2.0 * heavy) * 100.0) / 100.0;
      job.labor_cost = std::round(job.labor_hours * 42.0 * 100.0) / 100.0;
      job.breakdown = false;
      jobs.push_back(job);
    }
    const Job& last = jobs.back();
    const bool heavy_last = last.tasks >= 5 && last.labor_hours >= 6.0;

    // Wear shows up as steps: a mileage band where major components go, an
    // age past which corrosion and fatigue set in, and a visit count that
    // marks a problem vehicle. Recurring heavy repairs and a heavy last job
    // add to the risk.
    const auto step = [](double x, double at, double width) {
      return 1.0 / (1.0 + std::exp(-(x - at) / width));
    };
    const double logit = -3.2 + 3.5 * step(total_miles, 90000.0, 3000.0) + 2.5 * step(age, 8.0, 0.2) +
                         2.0 * step(static_cast<double>(visits), 9.5, 0.3) +
                         1.5 * (heavy_repeats > 0 ? 1.0 : 0.0) + 1.5 * (heavy_last ? 1.0 : 0.0);
    const double p = 1.0 / (1.0 + std::exp(-logit));
    const bool fails = unit(rng) < p;
    if (fails) {
      jobs[static_cast<std::size_t>(uniform(0.0, static_cast<double>(jobs.size())))].breakdown = true;
      ++summary.failing_vehicles;
    }

    for (const Job& job : jobs) {
      std::vector<std::string> row{id,
                                   format_date(registered),
                                   format_date(job.date),
                                   format_decimal(job.odometer),
                                   kWorkAreas[job.area],
                                   format_decimal(job.labor_hours),
                                   money(job.parts_cost),
                                   money(job.labor_cost),
                                   job.breakdown ? "Y" : "N",
                                   std::to_string(job.tasks)};
      // Damaged rows are never the only breakdown record of a vehicle, so
      // the label survives cleaning.
      if (!job.breakdown && unit(rng) < config.dirty_fraction) {
        ++summary.dirty_rows;
        switch (static_cast<int>(uniform(0.0, 5.0))) {
          case 0: row[3] = ""; break;
          case 1: row[6] = "-" + row[6]; break;
          case 2: row[2] = "2016-13-45"; break;
          case 3: row[5] = "NULL"; break;
          default: row.pop_back(); break;
        }
      }
      write_csv_row(out, row);
      ++summary.rows;
    }
  }
  return summary;
}

}  // namespace hmfsvm
