#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "predmon/errors.hpp"
#include "predmon/metrics.hpp"
#include "predmon/monitor.hpp"
#include "predmon/sim.hpp"

namespace predmon {

/// Shortest representation that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct VerdictRow {
  double t = 0.0;
  double min_level = 0.0;
  std::optional<int> first_violation;
  bool warning = false;
};

struct ConfusionRow {
  std::string method;
  int degree = 0;
  int horizon = 0;
  ConfusionCounts counts;
};

struct QMetricsRow {
  std::string method;
  int degree = 0;
  int horizon = 0;
  std::optional<double> lead_steps;       // empty when the trace has no violation
  double min_distance_error = 0.0;
};

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

}  // namespace detail

/// Header `t,x0,...,x{n-1}`, one row per sample, full double precision.
inline void write_trajectory(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out = detail::open_output(path);
  const std::size_t dim = log.states.empty() ? 0 : log.states.front().size();
  out << "t";
  for (std::size_t d = 0; d < dim; ++d) out << ",x" << d;
  out << "\n";
  for (std::size_t i = 0; i < log.times.size(); ++i) {
    out << format_double(log.times[i]);
    for (double v : log.states[i]) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

inline TrajectoryLog read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path);

  TrajectoryLog log;
  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  if (line.rfind("t,", 0) != 0) {
    throw io_error(path + ":1: expected header starting with 't,'");
  }
  std::size_t dim = 0;
  for (char c : line) {
    if (c == ',') ++dim;
  }

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    values.reserve(dim + 1);
    while (std::getline(row, field, ',')) {
      try {
        std::size_t pos = 0;
        values.push_back(std::stod(field, &pos));
        if (pos != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw io_error(path + ":" + std::to_string(lineno) + ": bad number '" + field + "'");
      }
    }
    if (values.size() != dim + 1) {
      throw io_error(path + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(dim + 1) + " fields, got " +
                     std::to_string(values.size()));
    }
    log.times.push_back(values.front());
    log.states.emplace_back(values.begin() + 1, values.end());
  }
  if (log.times.size() < 2) throw io_error(path + ": need at least two samples");
  log.tau = log.times[1] - log.times[0];
  if (!(log.tau > 0.0)) throw io_error(path + ": non-increasing timestamps");
  return log;
}

/// Schema: t,min_level,first_violation,warning (first_violation empty when
/// no violation is predicted).
inline void write_verdicts(const std::string& path,
                           const std::vector<VerdictRow>& rows) {
  std::ofstream out = detail::open_output(path);
  out << "t,min_level,first_violation,warning\n";
  for (const VerdictRow& row : rows) {
    out << format_double(row.t) << "," << format_double(row.min_level) << ",";
    if (row.first_violation) out << *row.first_violation;
    out << "," << (row.warning ? 1 : 0) << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

inline std::vector<VerdictRow> read_verdicts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,min_level,first_violation,warning") {
    throw io_error(path + ":1: bad verdict header");
  }
  std::vector<VerdictRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, level, violation, warning;
    if (!std::getline(row, t, ',') || !std::getline(row, level, ',') ||
        !std::getline(row, violation, ',') || !std::getline(row, warning)) {
      throw io_error(path + ":" + std::to_string(lineno) + ": malformed row");
    }
    VerdictRow r;
    try {
      r.t = std::stod(t);
      r.min_level = std::stod(level);
      if (!violation.empty()) r.first_violation = std::stoi(violation);
      r.warning = std::stoi(warning) != 0;
    } catch (const std::exception&) {
      throw io_error(path + ":" + std::to_string(lineno) + ": bad field");
    }
    rows.push_back(r);
  }
  return rows;
}

/// Schema: method,degree,horizon,tp,fp,fn,tn,tpr,tnr (tpr/tnr are "NA" when
/// the denominator is zero).
inline void write_confusion(const std::string& path,
                            const std::vector<ConfusionRow>& rows) {
  std::ofstream out = detail::open_output(path);
  out << "method,degree,horizon,tp,fp,fn,tn,tpr,tnr\n";
  for (const ConfusionRow& row : rows) {
    out << row.method << "," << row.degree << "," << row.horizon << ","
        << row.counts.tp << "," << row.counts.fp << "," << row.counts.fn << ","
        << row.counts.tn << ",";
    const auto sensitivity = tpr(row.counts);
    const auto specificity = tnr(row.counts);
    out << (sensitivity ? format_double(*sensitivity) : std::string("NA")) << ","
        << (specificity ? format_double(*specificity) : std::string("NA")) << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

/// Schema: method,degree,lookahead_steps,lookahead_seconds,rmse,mean,std.
inline void write_ablation(const std::string& path, const std::string& method,
                           int degree, double tau,
                           const std::vector<AblationRecord>& records,
                           bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::out);
  if (!out) throw io_error("cannot open for writing: " + path);
  if (!append) {
    out << "method,degree,lookahead_steps,lookahead_seconds,rmse,mean,std\n";
  }
  for (const AblationRecord& record : records) {
    out << method << "," << degree << "," << record.lookahead_steps << ","
        << format_double(record.lookahead_steps * tau) << ","
        << format_double(record.rmse) << "," << format_double(record.mean_error)
        << "," << format_double(record.std_error) << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

/// Schema: method,degree,horizon,lead_steps,min_distance_error.
inline void write_q_metrics(const std::string& path,
                            const std::vector<QMetricsRow>& rows) {
  std::ofstream out = detail::open_output(path);
  out << "method,degree,horizon,lead_steps,min_distance_error\n";
  for (const QMetricsRow& row : rows) {
    out << row.method << "," << row.degree << "," << row.horizon << ","
        << (row.lead_steps ? format_double(*row.lead_steps) : std::string("NA"))
        << "," << format_double(row.min_distance_error) << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace predmon
