#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

#include <json.hpp>
#include <roofkit/random.hpp>

namespace roofkit::cli {

namespace {

std::string fixed(double v) {
  char buf[64];
  if (v != 0.0 && std::abs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.2e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", v);
  }
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void render_table(const RunReport& r, std::ostream& out) {
  out << "command: " << r.command << "\n";
  out << "inputs:  " << r.digest << "\n";
  out << "seed:    " << r.seed << "\n";
  for (const auto& [key, value] : r.notes) out << key << ": " << value << "\n";
  if (!r.rows.empty()) {
    std::size_t claim_width = 5;
    std::size_t qty_width = 8;
    for (const auto& row : r.rows) {
      claim_width = std::max(claim_width, row.id.size() + (row.id.empty() ? 0 : 1) + row.claim.size());
      qty_width = std::max(qty_width, row.quantity.size());
    }
    out << "\n" << std::left << std::setw(static_cast<int>(claim_width)) << "claim" << "  "
        << std::setw(static_cast<int>(qty_width)) << "quantity" << "  " << std::setw(12) << "value" << "  "
        << std::setw(12) << "bracket" << "  " << std::setw(8) << "tol" << "  status\n";
    for (const auto& row : r.rows) {
      const std::string claim = row.id.empty() ? row.claim : row.id + " " + row.claim;
      out << std::left << std::setw(static_cast<int>(claim_width)) << claim << "  "
          << std::setw(static_cast<int>(qty_width)) << row.quantity << "  " << std::setw(12) << fixed(row.value)
          << "  " << std::setw(12) << (row.bracket ? fixed(*row.bracket) : "-") << "  " << std::setw(8)
          << sci(row.tolerance) << "  " << row.status << "\n";
    }
  }
  if (r.payload) out << "\n" << *r.payload << "\n";
}

void render_json(const RunReport& r, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = r.command;
  doc["inputs_digest"] = r.digest;
  doc["seed"] = r.seed;
  for (const auto& [key, value] : r.notes) doc[key] = value;
  doc["results"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j;
    if (!row.id.empty()) j["row"] = row.id;
    j["claim"] = row.claim;
    j["quantity"] = row.quantity;
    j["value"] = row.value;
    j["bracket"] = row.bracket ? nlohmann::ordered_json(*row.bracket) : nlohmann::ordered_json(nullptr);
    j["tolerance"] = row.tolerance;
    j["status"] = row.status;
    doc["results"].push_back(std::move(j));
  }
  if (r.payload) doc["payload"] = nlohmann::ordered_json::parse(*r.payload);
  out << doc.dump(2) << "\n";
}

void render_csv(const RunReport& r, std::ostream& out) {
  out << "row,claim,quantity,value,bracket,tolerance,status\n";
  for (const auto& row : r.rows) {
    out << csv_field(row.id) << "," << csv_field(row.claim) << "," << csv_field(row.quantity) << ","
        << exact(row.value) << "," << (row.bracket ? exact(*row.bracket) : "") << "," << exact(row.tolerance) << ","
        << csv_field(row.status) << "\n";
  }
}

}  // namespace

std::string hex_digest(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stream_id(bytes)));
  return buf;
}

void render(const RunReport& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::Table: render_table(report, out); break;
    case Format::Json: render_json(report, out); break;
    case Format::Csv: render_csv(report, out); break;
  }
}

}  // namespace roofkit::cli
