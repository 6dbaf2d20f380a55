#pragma once

// Pass/fail reports with residuals, and the text formats they serialize to.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace finsler {

using Json = nlohmann::ordered_json;

/// 17 significant digits; non-finite values become "nan", "inf", "-inf".
std::string format_double(double x);

/// JSON text with doubles at 17 significant digits, NaN/Inf as null, LF
/// line endings and a trailing newline.
std::string dump_json(const Json& j, int indent = 2);

struct Check {
  std::string check;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
};

std::string to_csv(const Table& t);

enum class ReportStatus { pass, fail, precondition_failed };

class Report {
 public:
  explicit Report(std::string title = {}) : title_(std::move(title)) {}

  /// Adds a check that passes iff residual is finite and residual <= tol.
  const Check& add(const std::string& name, double residual, double tol);
  /// Adds a check with an externally decided verdict.
  const Check& add_verdict(const std::string& name, double residual, double tol, bool pass);
  void merge(const Report& other, const std::string& prefix = {});

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  void set_precondition_failure(std::string reason);
  void note(const std::string& key, Json value) { extra_[key] = std::move(value); }

  const std::string& title() const { return title_; }
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;
  double max_residual() const;
  bool passed() const;
  ReportStatus status() const;
  const std::string& precondition_reason() const { return precondition_reason_; }

  Table& samples() { return samples_; }
  const Table& samples() const { return samples_; }

  Json to_json() const;

 private:
  std::string title_;
  std::optional<std::uint64_t> seed_;
  std::vector<Check> checks_;
  Table samples_;
  Json extra_ = Json::object();
  bool precondition_failed_ = false;
  std::string precondition_reason_;
};

const char* to_string(ReportStatus s);

}  // namespace finsler
