#include "hmfsvm/dataprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <tuple>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

bool is_null_marker(std::string_view cell) {
  const std::string v = lower(trim(cell));
  return v.empty() || v == "null" || v == "na" || v == "n/a" || v == "none";
}

std::optional<int> parse_int_exact(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    v = v * 10 + (ch - '0');
    if (v > 100000) return std::nullopt;
  }
  return v;
}

// Parsing outcome for one cell: nullopt value means null; `bad` means the
// cell was present but malformed.
template <typename T>
struct Cell {
  std::optional<T> value;
  bool bad = false;
};

Cell<double> number_cell(std::string_view raw) {
  if (is_null_marker(raw)) return {};
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return {std::nullopt, true};
  return {v, false};
}

Cell<long long> integer_cell(std::string_view raw) {
  const Cell<double> d = number_cell(raw);
  if (d.bad || !d.value) return {std::nullopt, d.bad};
  if (std::floor(*d.value) != *d.value || std::abs(*d.value) > 1e15) return {std::nullopt, true};
  return {static_cast<long long>(*d.value), false};
}

Cell<Date> date_cell(std::string_view raw) {
  if (is_null_marker(raw)) return {};
  const auto d = parse_date(trim(raw));
  if (!d) return {std::nullopt, true};
  return {d, false};
}

Cell<bool> flag_cell(std::string_view raw) {
  if (is_null_marker(raw)) return {};
  const std::string v = lower(trim(raw));
  if (v == "1" || v == "y" || v == "yes" || v == "true" || v == "t") return {true, false};
  if (v == "0" || v == "n" || v == "no" || v == "false" || v == "f") return {false, false};
  return {std::nullopt, true};
}

std::string line_subject(std::size_t line) { return "line " + std::to_string(line); }

std::optional<std::string> null_field(const RawJobRecord& r) {
  if (trim(r.vehicle_id).empty()) return "vehicle id";
  if (!r.registration_date) return "registration date";
  if (!r.job_date) return "job date";
  if (!r.odometer) return "odometer";
  if (trim(r.work_area).empty()) return "work area";
  if (!r.labor_hours) return "labor hours";
  if (!r.parts_cost) return "parts cost";
  if (!r.labor_cost) return "labor cost";
  if (!r.breakdown) return "breakdown flag";
  if (!r.tasks_in_job) return "tasks in job";
  return std::nullopt;
}

std::optional<std::string> out_of_range_field(const RawJobRecord& r) {
  if (*r.odometer < 0.0) return "odometer";
  if (*r.labor_hours < 0.0) return "labor hours";
  if (*r.parts_cost < 0.0) return "parts cost";
  if (*r.labor_cost < 0.0) return "labor cost";
  if (*r.tasks_in_job < 0) return "tasks in job";
  if (std::chrono::sys_days(*r.job_date) < std::chrono::sys_days(*r.registration_date)) {
    return "job date before registration";
  }
  return std::nullopt;
}

// Total order on a vehicle's jobs; the largest key is its last job.
auto job_key(const RawJobRecord& r) {
  return std::make_tuple(std::chrono::sys_days(*r.job_date), *r.tasks_in_job, *r.labor_hours,
                         *r.parts_cost, *r.labor_cost, r.work_area, *r.odometer, *r.breakdown);
}

const std::vector<std::string>& base_feature_names() {
  static const std::vector<std::string> names{
      "age_years",      "garage_visit_count", "odometer",           "avg_labor_hours",
      "avg_parts_cost", "avg_labor_cost",     "last_job_task_count", "last_job_labor_hours"};
  return names;
}

constexpr std::string_view kRepairPrefix = "repair:";

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Date> parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    const auto yy = parse_int_exact(text.substr(0, 4));
    const auto mm = parse_int_exact(text.substr(5, 2));
    const auto dd = parse_int_exact(text.substr(8, 2));
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy, m = *mm, d = *dd;
  } else if (text.size() == 10 && text[2] == '/' && text[5] == '/') {
    const auto dd = parse_int_exact(text.substr(0, 2));
    const auto mm = parse_int_exact(text.substr(3, 2));
    const auto yy = parse_int_exact(text.substr(6, 4));
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy, m = *mm, d = *dd;
  } else {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

double years_between(Date earlier, Date later) {
  const auto days = (std::chrono::sys_days(later) - std::chrono::sys_days(earlier)).count();
  return static_cast<double>(days) / 365.25;
}

std::vector<std::string> SchemaConfig::columns() const {
  return {vehicle_id, registration_date, job_date,   odometer,  work_area,
          labor_hours, parts_cost,       labor_cost, breakdown, tasks_in_job};
}

std::map<std::string, std::size_t> StageLog::counts_by_reason() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : removed) ++counts[e.reason];
  return counts;
}

void StageLog::write(std::ostream& out) const {
  out << "stage " << stage << ": input " << input << ", retained " << retained << ", removed "
      << removed.size() << '\n';
  for (const auto& [reason, count] : counts_by_reason()) {
    out << "  " << reason << ": " << count << '\n';
  }
  for (const auto& e : removed) out << "  - " << e.subject << ": " << e.reason << '\n';
}

ParsedJobs parse_fleet_csv(const std::filesystem::path& path, const SchemaConfig& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  return parse_fleet_csv(in, schema);
}

ParsedJobs parse_fleet_csv(std::istream& in, const SchemaConfig& schema) {
  const CsvTable table = read_csv(in);
  std::vector<std::size_t> col;
  std::vector<std::string> missing;
  for (const auto& name : schema.columns()) {
    const std::size_t c = table.column(name);
    if (c == CsvTable::npos) missing.push_back(name);
    col.push_back(c);
  }
  if (!missing.empty()) {
    std::string msg = "input is missing mandatory column(s):";
    for (const auto& m : missing) msg += " " + m;
    throw InputError(msg);
  }

  ParsedJobs out;
  out.log.stage = "parse";
  out.log.input = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    if (row.size() != table.header.size()) {
      out.log.removed.push_back({line_subject(line), "wrong field count"});
      continue;
    }
    RawJobRecord rec;
    rec.source_line = line;
    rec.vehicle_id = trim(row[col[0]]);
    const auto reg = date_cell(row[col[1]]);
    const auto job = date_cell(row[col[2]]);
    const auto odo = number_cell(row[col[3]]);
    rec.work_area = is_null_marker(row[col[4]]) ? std::string{} : trim(row[col[4]]);
    const auto hours = number_cell(row[col[5]]);
    const auto parts = number_cell(row[col[6]]);
    const auto labor = number_cell(row[col[7]]);
    const auto flag = flag_cell(row[col[8]]);
    const auto tasks = integer_cell(row[col[9]]);
    if (reg.bad || job.bad) {
      out.log.removed.push_back({line_subject(line), "invalid date"});
      continue;
    }
    if (odo.bad || hours.bad || parts.bad || labor.bad || tasks.bad) {
      out.log.removed.push_back({line_subject(line), "invalid number"});
      continue;
    }
    if (flag.bad) {
      out.log.removed.push_back({line_subject(line), "invalid flag"});
      continue;
    }
    rec.registration_date = reg.value;
    rec.job_date = job.value;
    rec.odometer = odo.value;
    rec.labor_hours = hours.value;
    rec.parts_cost = parts.value;
    rec.labor_cost = labor.value;
    rec.breakdown = flag.value;
    rec.tasks_in_job = tasks.value;
    out.records.push_back(std::move(rec));
  }
  out.log.retained = out.records.size();
  return out;
}

CleanedJobs clean(const std::vector<RawJobRecord>& records) {
  CleanedJobs out;
  out.log.stage = "clean";
  out.log.input = records.size();
  for (const auto& r : records) {
    if (null_field(r)) {
      out.log.removed.push_back({line_subject(r.source_line), "null"});
    } else if (out_of_range_field(r)) {
      out.log.removed.push_back({line_subject(r.source_line), "out of range"});
    } else {
      out.records.push_back(r);
    }
  }
  out.log.retained = out.records.size();
  return out;
}

DerivedVehicles derive_features(const std::vector<RawJobRecord>& records, Date as_of) {
  std::map<std::string, std::vector<const RawJobRecord*>> by_vehicle;
  for (const auto& r : records) {
    if (null_field(r)) throw InputError("derive_features needs cleaned records (" + line_subject(r.source_line) + ")");
    if (std::chrono::sys_days(*r.job_date) > std::chrono::sys_days(as_of)) {
      throw InputError("job on " + format_date(*r.job_date) + " (" + line_subject(r.source_line) +
                       ") is after the as-of date " + format_date(as_of));
    }
    by_vehicle[r.vehicle_id].push_back(&r);
  }

  DerivedVehicles out;
  out.log.stage = "derive";
  out.log.input = by_vehicle.size();
  for (auto& [id, jobs] : by_vehicle) {
    // Floating-point sums depend on order, so accumulate in job order.
    std::sort(jobs.begin(), jobs.end(),
              [](const RawJobRecord* a, const RawJobRecord* b) { return job_key(*a) < job_key(*b); });
    if (jobs.empty()) {
      out.log.removed.push_back({"vehicle " + id, "no records"});
      continue;
    }
    VehicleFeatureRow row;
    row.vehicle_id = id;
    Date registered = *jobs.front()->registration_date;
    const RawJobRecord* last = jobs.back();
    double hours = 0.0, parts = 0.0, labor = 0.0;
    for (const RawJobRecord* j : jobs) {
      if (std::chrono::sys_days(*j->registration_date) < std::chrono::sys_days(registered)) {
        registered = *j->registration_date;
      }
      row.odometer = std::max(row.odometer, *j->odometer);
      ++row.repair_counts[j->work_area];
      hours += *j->labor_hours;
      parts += *j->parts_cost;
      labor += *j->labor_cost;
      if (*j->breakdown) row.label = 1;
    }
    const double n = static_cast<double>(jobs.size());
    row.age_years = years_between(registered, as_of);
    row.garage_visit_count = jobs.size();
    row.avg_labor_hours = hours / n;
    row.avg_parts_cost = parts / n;
    row.avg_labor_cost = labor / n;
    row.last_job_task_count = static_cast<std::size_t>(*last->tasks_in_job);
    row.last_job_labor_hours = *last->labor_hours;
    out.rows.push_back(std::move(row));
  }
  out.log.retained = out.rows.size();
  return out;
}

FilteredVehicles apply_filters(const std::vector<VehicleFeatureRow>& rows) {
  FilteredVehicles out;
  out.log.stage = "filter";
  out.log.input = rows.size();
  for (const auto& r : rows) {
    std::vector<std::string> reasons;
    if (!(r.age_years < kMaxAgeYears)) reasons.emplace_back("age >= 14 years");
    if (!(r.odometer > kMinOdometer)) reasons.emplace_back("odometer <= 100 miles");
    if (!(r.odometer < kMaxOdometer)) reasons.emplace_back("odometer >= 182000 miles");
    if (reasons.empty()) {
      out.rows.push_back(r);
      continue;
    }
    std::string reason = reasons.front();
    for (std::size_t k = 1; k < reasons.size(); ++k) reason += "; " + reasons[k];
    out.log.removed.push_back({"vehicle " + r.vehicle_id, reason});
  }
  out.log.retained = out.rows.size();
  return out;
}

// ---------------------------------------------------------------------------

Dataset FeatureTable::to_dataset() const {
  if (!labels) throw InputError("feature table has no label column");
  Dataset d;
  d.features = features;
  d.labels = *labels;
  d.ids = ids;
  d.validate();
  return d;
}

FeatureTable FeatureTable::aligned_to(const std::vector<std::string>& names) const {
  FeatureTable out;
  out.feature_names = names;
  out.ids = ids;
  out.labels = labels;
  std::vector<std::size_t> source(names.size(), CsvTable::npos);
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(feature_names.begin(), feature_names.end(), names[k]);
    if (it != feature_names.end()) source[k] = static_cast<std::size_t>(it - feature_names.begin());
  }
  for (const auto& row : features) {
    Vector v(names.size(), 0.0);
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (source[k] != CsvTable::npos) v[k] = row[source[k]];
    }
    out.features.push_back(std::move(v));
  }
  return out;
}

FeatureTable to_feature_table(const std::vector<VehicleFeatureRow>& rows) {
  std::set<std::string> repair_types;
  for (const auto& r : rows) {
    for (const auto& [type, count] : r.repair_counts) repair_types.insert(type);
  }
  FeatureTable t;
  t.feature_names = base_feature_names();
  for (const auto& type : repair_types) t.feature_names.push_back(std::string(kRepairPrefix) + type);
  t.labels.emplace();
  for (const auto& r : rows) {
    Vector v{r.age_years,
             static_cast<double>(r.garage_visit_count),
             r.odometer,
             r.avg_labor_hours,
             r.avg_parts_cost,
             r.avg_labor_cost,
             static_cast<double>(r.last_job_task_count),
             r.last_job_labor_hours};
    for (const auto& type : repair_types) {
      const auto it = r.repair_counts.find(type);
      v.push_back(it == r.repair_counts.end() ? 0.0 : static_cast<double>(it->second));
    }
    t.ids.push_back(r.vehicle_id);
    t.features.push_back(std::move(v));
    t.labels->push_back(r.label);
  }
  return t;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  std::vector<std::string> header{"vehicle_id"};
  header.insert(header.end(), table.feature_names.begin(), table.feature_names.end());
  if (table.labels) header.emplace_back("label");
  write_csv_row(out, header);
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::vector<std::string> fields{table.ids.empty() ? std::to_string(i) : table.ids[i]};
    for (double v : table.features[i]) fields.push_back(format_decimal(v));
    if (table.labels) fields.push_back(std::to_string((*table.labels)[i]));
    write_csv_row(out, fields);
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  const CsvTable csv = read_csv(in);
  if (csv.header.empty() || csv.header.front() != "vehicle_id") {
    throw InputError("feature file must start with a vehicle_id column");
  }
  const std::size_t label_col = csv.column("label");
  FeatureTable t;
  for (std::size_t c = 1; c < csv.header.size(); ++c) {
    if (c != label_col) t.feature_names.push_back(csv.header[c]);
  }
  if (label_col != CsvTable::npos) t.labels.emplace();
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string where = "feature file line " + std::to_string(csv.line_numbers[r]);
    if (row.size() != csv.header.size()) throw InputError(where + ": wrong field count");
    t.ids.push_back(row[0]);
    Vector v;
    for (std::size_t c = 1; c < row.size(); ++c) {
      const Cell<double> cell = number_cell(row[c]);
      if (cell.bad || !cell.value) throw InputError(where + ": column '" + csv.header[c] + "' is not a number");
      if (c == label_col) {
        if (*cell.value != 1.0 && *cell.value != -1.0) throw InputError(where + ": label must be -1 or 1");
        t.labels->push_back(static_cast<int>(*cell.value));
      } else {
        v.push_back(*cell.value);
      }
    }
    t.features.push_back(std::move(v));
  }
  return t;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open feature file '" + path.string() + "'");
  return read_feature_csv(in);
}

}  // namespace hmfsvm
