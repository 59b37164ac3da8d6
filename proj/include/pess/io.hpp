#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pess/embedding.hpp"
#include "pess/service.hpp"
#include "pess/simulator.hpp"
#include "pess/topology.hpp"

namespace pess {

/// Malformed or invalid document. line/column are 1-based and set for syntax
/// errors; location names the offending field (e.g. "links[3].b").
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, int column, std::string location,
             const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& location() const { return location_; }

 private:
  std::string source_;
  int line_;
  int column_;
  std::string location_;
};

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

nlohmann::json parse_json(std::string_view text, const std::string& source);

// Topology documents.
PhysicalNetwork topology_from_json(const nlohmann::json& doc,
                                   const std::string& source = "<topology>");
PhysicalNetwork parse_topology(std::string_view text,
                               const std::string& source = "<topology>");
PhysicalNetwork load_topology(const std::filesystem::path& path);
nlohmann::json topology_to_json(const PhysicalNetwork& net);
std::string dump_topology(const PhysicalNetwork& net);

// Service request documents. Bare VSNF names are resolved in the catalog.
ServiceRequest request_from_json(const nlohmann::json& doc,
                                 const PhysicalNetwork& net,
                                 const VsnfCatalog& catalog,
                                 const std::string& source = "<request>");
ServiceRequest parse_request(std::string_view text, const PhysicalNetwork& net,
                             const VsnfCatalog& catalog,
                             const std::string& source = "<request>");
ServiceRequest load_request(const std::filesystem::path& path,
                            const PhysicalNetwork& net,
                            const VsnfCatalog& catalog);
nlohmann::json request_to_json(const ServiceRequest& req,
                               const PhysicalNetwork& net);
std::string dump_request(const ServiceRequest& req, const PhysicalNetwork& net);

// Embedding documents: hosts and routes as node-name lists.
nlohmann::json embedding_to_json(const Embedding& emb, const ServiceRequest& req,
                                 const PhysicalNetwork& net);
Embedding embedding_from_json(const nlohmann::json& doc,
                              const ServiceRequest& req,
                              const PhysicalNetwork& net,
                              const std::string& source = "<embedding>");

// Configuration sections.
nlohmann::json to_json(const RequestGenConfig& cfg);
void update_from_json(const nlohmann::json& doc, RequestGenConfig& cfg);
nlohmann::json to_json(const WorkloadConfig& cfg);
void update_from_json(const nlohmann::json& doc, WorkloadConfig& cfg);

// Metrics output.
inline constexpr std::string_view kMetricsCsvSchema = "# pess-metrics-csv v1";
std::string metrics_csv_header();
std::string metrics_csv_row(const Metrics& m);
std::string timing_csv_header();
std::string timing_csv_row(const Metrics& m);
nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const TimingStats& t);
nlohmann::json to_json(const OverheadReport& r);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace pess
