#include "finsler/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace finsler {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
  os << Json(s).dump(-1, ' ', false, Json::error_handler_t::replace);
}

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_string(os, k);
        os << (indent < 0 ? ":" : ": ");
        write_json(os, v, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write_json(os, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        os << "null";
      } else {
        os << format_double(d);
      }
      return;
    }
    case Json::value_t::string:
      write_string(os, j.get<std::string>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  os << '\n';
  return os.str();
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

const Check& Report::add(const std::string& name, double residual, double tol) {
  return add_verdict(name, residual, tol, std::isfinite(residual) && residual <= tol);
}

const Check& Report::add_verdict(const std::string& name, double residual, double tol, bool pass) {
  checks_.push_back(Check{name, residual, tol, pass});
  return checks_.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const Check& c : other.checks_) checks_.push_back(Check{prefix + c.check, c.residual, c.tol, c.pass});
  if (other.precondition_failed_) set_precondition_failure(other.precondition_reason_);
}

void Report::set_precondition_failure(std::string reason) {
  precondition_failed_ = true;
  precondition_reason_ = std::move(reason);
}

const Check* Report::find(const std::string& name) const {
  for (const Check& c : checks_) {
    if (c.check == name) return &c;
  }
  return nullptr;
}

double Report::max_residual() const {
  double m = 0.0;
  for (const Check& c : checks_) {
    if (std::isnan(c.residual)) return c.residual;
    m = std::max(m, c.residual);
  }
  return m;
}

bool Report::passed() const {
  if (precondition_failed_) return false;
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

ReportStatus Report::status() const {
  if (precondition_failed_) return ReportStatus::precondition_failed;
  return passed() ? ReportStatus::pass : ReportStatus::fail;
}

const char* to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::pass: return "pass";
    case ReportStatus::fail: return "fail";
    case ReportStatus::precondition_failed: return "precondition_failed";
  }
  return "fail";
}

Json Report::to_json() const {
  Json j = Json::object();
  j["report"] = title_;
  if (seed_) j["seed"] = *seed_;
  j["status"] = to_string(status());
  j["pass"] = passed();
  if (precondition_failed_) j["precondition"] = precondition_reason_;
  Json checks = Json::array();
  for (const Check& c : checks_) {
    Json e = Json::object();
    e["check"] = c.check;
    e["residual"] = c.residual;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  if (!samples_.rows.empty()) {
    Json s = Json::object();
    s["columns"] = samples_.columns;
    s["rows"] = samples_.rows;
    j["samples"] = std::move(s);
  }
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  return j;
}

}  // namespace finsler
