#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm {

using Date = std::chrono::year_month_day;

// Accepts YYYY-MM-DD and DD/MM/YYYY; nullopt for anything else or an
// impossible calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);
// (later - earlier) in 365.25-day years.
double years_between(Date earlier, Date later);

/// Source column names for each job-record field.
struct SchemaConfig {
  std::string vehicle_id = "vehicle_registration_number";
  std::string registration_date = "registration_date";
  std::string job_date = "job_date";
  std::string odometer = "odometer";
  std::string work_area = "work_area_description";
  std::string labor_hours = "labor_hours";
  std::string parts_cost = "parts_cost";
  std::string labor_cost = "labor_cost";
  std::string breakdown = "breakdown_or_callout";
  std::string tasks_in_job = "tasks_in_job";

  std::vector<std::string> columns() const;
};

/// One garage job. Blank or null-marker cells ("", NULL, NA, N/A, null) are
/// kept as nullopt for the cleaning stage to remove.
struct RawJobRecord {
  std::size_t source_line = 0;
  std::string vehicle_id;
  std::optional<Date> registration_date;
  std::optional<Date> job_date;
  std::optional<double> odometer;
  std::string work_area;
  std::optional<double> labor_hours;
  std::optional<double> parts_cost;
  std::optional<double> labor_cost;
  std::optional<bool> breakdown;
  std::optional<long long> tasks_in_job;

  friend bool operator==(const RawJobRecord&, const RawJobRecord&) = default;
};

struct LogEntry {
  std::string subject;  // "line 12" or "vehicle AB12CDE"
  std::string reason;
};

/// Bookkeeping for one pipeline stage: input = retained + removed.size().
struct StageLog {
  std::string stage;
  std::size_t input = 0;
  std::size_t retained = 0;
  std::vector<LogEntry> removed;

  std::map<std::string, std::size_t> counts_by_reason() const;
  bool conserved() const noexcept { return input == retained + removed.size(); }
  void write(std::ostream& out) const;
};

struct ParsedJobs {
  std::vector<RawJobRecord> records;
  StageLog log;  // rows that could not be parsed (wrong field count, invalid date, ...)
};

// Throws InputError if the file is missing or a configured column is absent.
ParsedJobs parse_fleet_csv(const std::filesystem::path& path, const SchemaConfig& schema = {});
ParsedJobs parse_fleet_csv(std::istream& in, const SchemaConfig& schema = {});

struct CleanedJobs {
  std::vector<RawJobRecord> records;
  StageLog log;  // reasons "null" and "out of range"
};

CleanedJobs clean(const std::vector<RawJobRecord>& records);

struct VehicleFeatureRow {
  std::string vehicle_id;
  double age_years = 0.0;
  std::size_t garage_visit_count = 0;
  double odometer = 0.0;  // latest (largest) reading
  std::map<std::string, std::size_t> repair_counts;
  double avg_labor_hours = 0.0;
  double avg_parts_cost = 0.0;
  double avg_labor_cost = 0.0;
  std::size_t last_job_task_count = 0;
  double last_job_labor_hours = 0.0;
  int label = -1;  // +1 if any job was a breakdown or callout

  friend bool operator==(const VehicleFeatureRow&, const VehicleFeatureRow&) = default;
};

struct DerivedVehicles {
  std::vector<VehicleFeatureRow> rows;  // sorted by vehicle id
  StageLog log;
};

/// One row per vehicle. Throws InputError if any job postdates `as_of`.
/// The result does not depend on record order.
DerivedVehicles derive_features(const std::vector<RawJobRecord>& records, Date as_of);

inline constexpr double kMaxAgeYears = 14.0;
inline constexpr double kMinOdometer = 100.0;
inline constexpr double kMaxOdometer = 182000.0;

struct FilteredVehicles {
  std::vector<VehicleFeatureRow> rows;
  StageLog log;
};

/// Keeps rows with age < 14 years and 100 < odometer < 182000 (all strict).
FilteredVehicles apply_filters(const std::vector<VehicleFeatureRow>& rows);

/// Feature matrix with named columns, as written to and read from the
/// feature CSV (vehicle_id, <features...>, label).
struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> ids;
  std::vector<Vector> features;
  std::optional<std::vector<int>> labels;

  std::size_t size() const noexcept { return features.size(); }
  // Throws InputError if the table has no label column.
  Dataset to_dataset() const;
  // Columns reordered to `names`; names this table lacks are filled with 0.
  FeatureTable aligned_to(const std::vector<std::string>& names) const;
};

FeatureTable to_feature_table(const std::vector<VehicleFeatureRow>& rows);
void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(const std::filesystem::path& path);
FeatureTable read_feature_csv(std::istream& in);

}  // namespace hmfsvm
