#include "dgff/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace dgff {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void write_stamp(std::ofstream& out, const OutputMeta& meta) {
  out << "# config_hash=" << meta.config_hash << " seed=" << meta.seed
      << "\n";
}

Json report_to_json_value(const StatReport& report) {
  Json params = Json::object();
  for (const auto& [name, value] : report.params) params[name] = value;
  Json j = Json::object();
  j["estimator"] = report.estimator;
  j["params"] = std::move(params);
  j["estimate"] = report.estimate;
  j["stderr"] = report.standard_error;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  return j;
}

StatReport report_from_json_value(const Json& j) {
  StatReport report;
  report.estimator = j.at("estimator").get<std::string>();
  for (const auto& [name, value] : j.at("params").items()) {
    report.params.emplace_back(name, value.get<double>());
  }
  report.estimate = j.at("estimate").get<double>();
  report.standard_error = j.at("stderr").get<double>();
  report.tolerance = j.at("tolerance").get<double>();
  report.pass = j.at("pass").get<bool>();
  return report;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, value);
  return buffer;
}

void write_extremal_csv(const std::filesystem::path& path,
                        const std::vector<ExtremalPointSet>& sets,
                        const OutputMeta& meta) {
  std::ofstream out = open_output(path);
  write_stamp(out, meta);
  out << "replica,x,y,centered_height\n";
  for (const ExtremalPointSet& set : sets) {
    for (const ExtremalAtom& atom : set.atoms) {
      out << set.stream_id << ',' << format_double(atom.position.x) << ','
          << format_double(atom.position.y) << ','
          << format_double(atom.centered_height) << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_grid_measure_csv(const std::filesystem::path& path,
                            const GridMeasure& measure,
                            const OutputMeta& meta) {
  std::ofstream out = open_output(path);
  write_stamp(out, meta);
  out << "cell_x,cell_y,mass\n";
  for (std::size_t i = 0; i < measure.centers.size(); ++i) {
    out << format_double(measure.centers[i].x) << ','
        << format_double(measure.centers[i].y) << ','
        << format_double(measure.masses[i]) << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_named_values_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, double>>& rows,
    const OutputMeta& meta) {
  std::ofstream out = open_output(path);
  write_stamp(out, meta);
  out << "name,value\n";
  for (const auto& [name, value] : rows) {
    out << name << ',' << format_double(value) << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_field_csv(const std::filesystem::path& path,
                     const std::vector<FieldSample>& fields,
                     const OutputMeta& meta) {
  std::ofstream out = open_output(path);
  write_stamp(out, meta);
  out << "replica,x,y,value\n";
  for (const FieldSample& field : fields) {
    const bool lattice = !field.lattice.empty();
    const std::size_t n = lattice ? field.lattice.size() : field.points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = lattice ? field.lattice.embed(field.lattice.vertices()[i])
                             : field.points[i];
      out << field.stream_id << ',' << format_double(p.x) << ','
          << format_double(p.y) << ','
          << format_double(field.values[static_cast<Eigen::Index>(i)])
          << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::string stat_report_to_json(const StatReport& report) {
  return report_to_json_value(report).dump(2);
}

StatReport stat_report_from_json(const std::string& text) {
  return report_from_json_value(Json::parse(text));
}

void write_stat_reports_json(const std::filesystem::path& path,
                             const std::vector<StatReport>& reports,
                             const OutputMeta& meta) {
  Json doc = Json::object();
  doc["config_hash"] = meta.config_hash;
  doc["seed"] = meta.seed;
  Json array = Json::array();
  for (const StatReport& report : reports) {
    array.push_back(report_to_json_value(report));
  }
  doc["reports"] = std::move(array);
  std::ofstream out = open_output(path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

void write_result_record(const std::filesystem::path& path,
                         const ResultRecord& record) {
  Json doc = Json::object();
  doc["config_hash"] = record.config_hash;
  doc["seed"] = record.seed;
  doc["threads"] = record.threads;
  doc["experiment"] = record.experiment;
  doc["artifact_version"] = record.artifact_version;
  doc["wall_seconds"] = record.wall_seconds;
  Json reports = Json::array();
  for (const StatReport& report : record.reports) {
    reports.push_back(report_to_json_value(report));
  }
  doc["reports"] = std::move(reports);
  doc["output_files"] = record.output_files;
  std::ofstream out = open_output(path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

ResultRecord read_result_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw IoError("malformed result record " + path.string() + ": " +
                  e.what());
  }
  ResultRecord record;
  record.config_hash = doc.at("config_hash").get<std::string>();
  record.seed = doc.at("seed").get<std::uint64_t>();
  record.threads = doc.at("threads").get<int>();
  record.experiment = doc.at("experiment").get<std::string>();
  record.artifact_version = doc.at("artifact_version").get<std::string>();
  record.wall_seconds = doc.at("wall_seconds").get<double>();
  for (const Json& j : doc.at("reports")) {
    record.reports.push_back(report_from_json_value(j));
  }
  for (const Json& j : doc.at("output_files")) {
    record.output_files.push_back(j.get<std::string>());
  }
  return record;
}

}  // namespace dgff
