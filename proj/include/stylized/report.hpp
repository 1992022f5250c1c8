#pragma once

// Run configuration, JSON/CSV serialisation and hashing of analysis outputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "stylized/battery.hpp"
#include "stylized/cluster.hpp"
#include "stylized/error.hpp"

namespace stylized {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "stylized-report/1";

// ---------------------------------------------------------------------------
// Number formatting and writers

/// %.17g, which round-trips every double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json_value(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json_value(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (scalars) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json_value(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json_value(os, j[i], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no NaN/inf literals.
      if (!std::isfinite(x)) {
        os << "null";
      } else {
        os << format_number(x);
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Pretty-printed JSON with 17-significant-digit floats and a trailing newline.
inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  detail::write_json_value(os, j, 2, 0);
  os << "\n";
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Input, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Input, "write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Input, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, path.string() + ": " + e.what());
  }
}

/// Headered CSV whose first line is `# config_hash: <hash>`.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) fail(ErrorKind::InvalidArgument, "csv row width mismatch");
    rows_.push_back(std::move(cells));
  }

  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

  [[nodiscard]] std::string str(const std::string& config_hash) const {
    std::ostringstream os;
    os << "# config_hash: " << config_hash << "\n";
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        os << '"';
        for (char ch : c) {
          if (ch == '"') os << '"';
          os << ch;
        }
        os << '"';
      } else {
        os << c;
      }
    }
    os << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Hashing

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Input, "sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

inline std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path output_dir = "out";
  AnalysisConfig analysis{};
  std::map<std::string, double> threshold_overrides;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
};

inline void validate(const RunConfig& c) {
  const auto& a = c.analysis;
  if (!(a.significance > 0.0 && a.significance < 1.0)) {
    fail(ErrorKind::InvalidArgument, "significance level must lie in (0, 1)");
  }
  if (a.horizons.empty()) fail(ErrorKind::InvalidArgument, "at least one horizon is required");
  for (std::size_t i = 0; i < a.horizons.size(); ++i) {
    if (a.horizons[i] <= 0) fail(ErrorKind::InvalidArgument, "horizons must be positive");
    if (i > 0 && a.horizons[i] <= a.horizons[i - 1]) fail(ErrorKind::InvalidArgument, "horizons must increase");
  }
  if (a.asymmetry_windows.empty()) fail(ErrorKind::InvalidArgument, "at least one asymmetry window is required");
  if (a.absence_lag == 0 || a.clustering_lag == 0) fail(ErrorKind::InvalidArgument, "portmanteau lags must be >= 1");
  if (c.workers == 0) fail(ErrorKind::InvalidArgument, "workers must be >= 1");
}

inline Json thresholds_json(const VerdictThresholds& t) {
  Json j = Json::object();
  for (const auto& [name, member] : kThresholdFields) j[std::string(name)] = t.*member;
  return j;
}

/// Every setting that can change an output number. Paths, worker count and
/// the seed are left out: they do not affect analysis results.
inline Json analysis_config_json(const AnalysisConfig& a) {
  Json j;
  j["horizons"] = a.horizons;
  j["overlapping"] = a.overlapping;
  j["significance"] = a.significance;
  j["absence_lag"] = a.absence_lag;
  j["clustering_lag"] = a.clustering_lag;
  j["single_lag_max"] = a.single_lag_max;
  j["acf_decay_max_lag"] = a.acf_decay_max_lag;
  j["asymmetry_windows"] = a.asymmetry_windows;
  j["min_observations"] = a.min_observations;
  j["tail"] = {{"k_min", a.tail.k_min},
               {"grid_points", a.tail.grid_points},
               {"heavy_xi_cutoff", a.tail.heavy_xi_cutoff},
               {"require_pareto_preference", a.tail.require_pareto_preference},
               {"preference_z", a.tail.preference_z},
               {"admissible_xi", a.tail.admissible_xi}};
  j["taylor"] = {{"d_lo", a.taylor.d_lo},
                 {"d_hi", a.taylor.d_hi},
                 {"fd_step", a.taylor.fd_step},
                 {"gradient_tol", a.taylor.gradient_tol},
                 {"bracket_tol", a.taylor.bracket_tol},
                 {"grid_points", a.taylor.grid_points},
                 {"max_newton", a.taylor.max_newton}};
  j["thresholds"] = thresholds_json(a.thresholds);
  return j;
}

/// Inverse of analysis_config_json, used to reload the settings of a past run.
inline AnalysisConfig analysis_config_from_json(const Json& j) {
  try {
    AnalysisConfig a;
    a.horizons = j.at("horizons").get<std::vector<int>>();
    a.overlapping = j.at("overlapping").get<bool>();
    a.significance = j.at("significance").get<double>();
    a.absence_lag = j.at("absence_lag").get<std::size_t>();
    a.clustering_lag = j.at("clustering_lag").get<std::size_t>();
    a.single_lag_max = j.at("single_lag_max").get<std::size_t>();
    a.acf_decay_max_lag = j.at("acf_decay_max_lag").get<std::size_t>();
    a.asymmetry_windows = j.at("asymmetry_windows").get<std::vector<std::size_t>>();
    a.min_observations = j.at("min_observations").get<std::size_t>();
    const auto& t = j.at("tail");
    a.tail.k_min = t.at("k_min").get<std::size_t>();
    a.tail.grid_points = t.at("grid_points").get<std::size_t>();
    a.tail.heavy_xi_cutoff = t.at("heavy_xi_cutoff").get<double>();
    a.tail.require_pareto_preference = t.at("require_pareto_preference").get<bool>();
    a.tail.preference_z = t.at("preference_z").get<double>();
    a.tail.admissible_xi = t.at("admissible_xi").get<double>();
    const auto& y = j.at("taylor");
    a.taylor.d_lo = y.at("d_lo").get<double>();
    a.taylor.d_hi = y.at("d_hi").get<double>();
    a.taylor.fd_step = y.at("fd_step").get<double>();
    a.taylor.gradient_tol = y.at("gradient_tol").get<double>();
    a.taylor.bracket_tol = y.at("bracket_tol").get<double>();
    a.taylor.grid_points = y.at("grid_points").get<std::size_t>();
    a.taylor.max_newton = y.at("max_newton").get<std::size_t>();
    std::map<std::string, double> thr;
    const auto& th = j.at("thresholds");
    for (auto it = th.begin(); it != th.end(); ++it) thr[it.key()] = it.value().get<double>();
    apply_overrides(a.thresholds, thr);
    return a;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, std::string("run configuration: ") + e.what());
  }
}

inline std::string config_hash(const AnalysisConfig& a) { return sha256_hex(to_json_text(analysis_config_json(a))); }

/// Applies a JSON config document on top of `c`. Recognised keys mirror the
/// command-line flags; unknown keys are rejected.
inline void apply_config_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Input, "config file must hold a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      auto& a = c.analysis;
      if (k == "manifest") c.manifest = v.get<std::string>();
      else if (k == "output_dir") c.output_dir = v.get<std::string>();
      else if (k == "horizons") a.horizons = v.get<std::vector<int>>();
      else if (k == "overlapping") a.overlapping = v.get<bool>();
      else if (k == "significance") a.significance = v.get<double>();
      else if (k == "absence_lag") a.absence_lag = v.get<std::size_t>();
      else if (k == "clustering_lag") a.clustering_lag = v.get<std::size_t>();
      else if (k == "single_lag_max") a.single_lag_max = v.get<std::size_t>();
      else if (k == "acf_decay_max_lag") a.acf_decay_max_lag = v.get<std::size_t>();
      else if (k == "asymmetry_windows") a.asymmetry_windows = v.get<std::vector<std::size_t>>();
      else if (k == "min_observations") a.min_observations = v.get<std::size_t>();
      else if (k == "workers") c.workers = v.get<std::size_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "thresholds") {
        for (auto t = v.begin(); t != v.end(); ++t) c.threshold_overrides[t.key()] = t.value().get<double>();
      } else {
        fail(ErrorKind::Input, "unknown config key: " + k);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, std::string("config file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialisation of analysis results

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T, class F>
Json outcome_json(const Outcome<T>& o, F&& to) {
  if (!o) return Json{{"not_evaluable", o.reason()}};
  return to(*o);
}

inline Json to_json(const MomentSummary& m) {
  return {{"n", m.n},
          {"mean", m.mean},
          {"variance", m.variance},
          {"skewness", m.skewness},
          {"kurtosis", m.kurtosis},
          {"small_sample", m.small_sample}};
}

inline Json to_json(const TestResult& t) {
  Json j{{"statistic", t.statistic}, {"p_value", t.p_value}, {"df", t.df}};
  if (t.level) j["level"] = *t.level;
  return j;
}

inline Json to_json(const TailIndexResult& t) {
  return {{"xi", t.xi},
          {"alpha", number_or_null(t.alpha)},
          {"alpha_finite", t.alpha_finite()},
          {"k", t.k},
          {"n", t.n},
          {"heavy_tailed", t.heavy_tailed},
          {"ks_distance", t.ks_distance},
          {"pareto_loglik", t.pareto_loglik},
          {"exponential_loglik", t.exponential_loglik},
          {"preference_z", t.preference_z}};
}

inline Json to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"rss", f.rss}, {"n", f.n}};
}

inline Json to_json(const AsymmetryResult& a) {
  Json c = Json::array();
  for (const auto& [h, v] : a.C) c.push_back({{"lag", h}, {"corr", number_or_null(v)}});
  Json sig = Json::array();
  for (bool b : a.significant_positive) sig.push_back(b);
  return {{"window", a.window},     {"windows_used", a.windows_used},
          {"max_lag", a.max_lag},   {"ccf", c},
          {"diffs", a.diffs},       {"bands", a.bands},
          {"significant_positive", sig}, {"any_significant", a.any_significant}};
}

inline Json to_json(const HurstResult& h) {
  return {{"H", h.H},
          {"raw_slope", h.raw_slope},
          {"block_lengths", h.grid},
          {"rs_values", h.rs_values},
          {"skipped_blocks", h.skipped_blocks},
          {"fit", to_json(h.fit)}};
}

inline Json to_json(const AcfDecayFit& a) {
  return {{"beta", a.beta}, {"lags_used", a.lags_used}, {"excluded_lags", a.excluded_lags}, {"fit", to_json(a.fit)}};
}

inline Json to_json(const PortmanteauResult& p) {
  return {{"variant", p.variant == PortmanteauVariant::LjungBox ? "ljung-box" : "box-pierce"},
          {"m", p.m},
          {"Q", p.Q},
          {"p_value", p.p_value},
          {"n", p.n}};
}

inline Json to_json(const SingleLagTests& s) {
  return {{"lag", s.lag}, {"r", s.r}, {"normal", to_json(s.normal)}, {"student", to_json(s.student)}};
}

inline Json to_json(const GarchFit& g) {
  return {{"mu", g.mu},           {"omega", g.omega},           {"alpha1", g.alpha1},
          {"beta1", g.beta1},     {"loglik", g.loglik},         {"converged", g.converged},
          {"iterations", g.iterations}, {"restarts", g.restarts}};
}

inline Json to_json(const ConditionalTailComparison& c) {
  return {{"returns_tail", to_json(c.returns_tail)},
          {"residuals_tail", to_json(c.residuals_tail)},
          {"alpha_decreased", c.decreased},
          {"xi_decreased", c.xi_decreased}};
}

inline Json to_json(const KurtosisTestResult& k) {
  return {{"kurtosis", k.K}, {"statistic", k.statistic}, {"p_value", k.p_value}};
}

inline Json to_json(const TaylorResult& t) {
  return {{"d_star", t.d_star},
          {"acf_at_d_star", t.acf_at_d_star},
          {"acf_abs", t.acf_abs},
          {"acf_sq", t.acf_sq},
          {"abs_exceeds_sq", t.abs_exceeds_sq},
          {"method", std::string(to_string(t.method))},
          {"d_lo", t.d_lo},
          {"d_hi", t.d_hi},
          {"unreliable", t.unreliable}};
}

inline Json to_json(double x) { return number_or_null(x); }

template <class T>
Json to_json(const Outcome<T>& o) {
  return outcome_json(o, [](const T& v) { return to_json(v); });
}

inline Json to_json(const StockFactReport& r) {
  Json j;
  j["ticker"] = r.ticker;
  j["n_obs"] = r.n_obs;
  j["dropped_rows"] = r.dropped_rows;
  if (r.skipped) {
    j["skipped"] = *r.skipped;
    return j;
  }
  j["return_moments"] = to_json(r.return_moments);
  j["mean_return"] = to_json(r.mean_return);
  j["sd_return"] = to_json(r.sd_return);
  j["leverage_corr"] = to_json(r.leverage_corr);
  Json norm = Json::array();
  for (const auto& n : r.normality) {
    norm.push_back({{"horizon", n.horizon},
                    {"overlapping", n.overlapping},
                    {"n", n.n},
                    {"ks", to_json(n.ks)},
                    {"sw", to_json(n.sw)},
                    {"jb", to_json(n.jb)}});
  }
  j["normality"] = norm;
  j["tail"] = to_json(r.tail);
  j["volume_tail"] = to_json(r.volume_tail);
  j["volume_volatility_corr"] = to_json(r.volume_volatility_corr);
  j["volume_return_corr"] = to_json(r.volume_return_corr);
  Json asym = Json::array();
  for (const auto& [w, a] : r.asymmetry) {
    Json e = to_json(a);
    if (!a) e["window"] = w;
    asym.push_back(e);
  }
  j["asymmetry"] = asym;
  j["hurst"] = to_json(r.hurst);
  j["volume_hurst"] = to_json(r.volume_hurst);
  j["acf_decay"] = to_json(r.acf_decay);
  j["absence"] = {{"ljung_box", to_json(r.absence_lb)}, {"box_pierce", to_json(r.absence_bp)}};
  Json single = Json::array();
  for (const auto& s : r.clustering_single) single.push_back(to_json(s));
  j["clustering"] = {{"ljung_box", to_json(r.clustering_lb)},
                     {"box_pierce", to_json(r.clustering_bp)},
                     {"single_lag", single}};
  j["garch"] = to_json(r.garch);
  j["conditional_tail"] = to_json(r.conditional_tail);
  j["intermittency"] = {{"returns", to_json(r.kurtosis_returns)}, {"residuals", to_json(r.kurtosis_residuals)}};
  j["taylor"] = to_json(r.taylor);
  return j;
}

inline Json to_json(const FactVerdict& v) {
  Json j;
  j["fact"] = std::string(fact_id(v.fact));
  j["title"] = std::string(fact_title(v.fact));
  j["verdict"] = v.verdict;
  j["statistic_name"] = v.statistic_name;
  j["statistic"] = number_or_null(v.statistic);
  Json agg = Json::object();
  for (const auto& [k, x] : v.aggregates) agg[k] = number_or_null(x);
  j["aggregates"] = agg;
  j["support"] = v.support;
  j["low_support"] = v.low_support;
  j["rule"] = v.rule;
  if (v.reason) j["reason"] = *v.reason;
  return j;
}

inline Json to_json(const MarketFactSummary& s) {
  Json j;
  j["market"] = s.market;
  j["n_stocks"] = s.n_stocks;
  j["n_analyzed"] = s.n_analyzed;
  j["skipped"] = s.skipped;
  j["risk_return_corr"] = to_json(s.risk_return_corr);
  Json facts = Json::array();
  for (const auto& f : s.facts) facts.push_back(to_json(f));
  j["facts"] = facts;
  const auto vec = verdict_vector(s);
  j["verdicts"] = vec.verdicts;
  return j;
}

/// Reads the verdict vector of a summary document: either the full summary
/// or a minimal {"market": ..., "verdicts": [...]} form.
inline MarketVerdictVector verdict_vector_from_json(const Json& j) {
  try {
    MarketVerdictVector v;
    v.market = j.at("market").get<std::string>();
    const auto& arr = j.at("verdicts");
    if (arr.is_array()) {
      if (arr.size() != kFactCount) {
        fail(ErrorKind::Input, "market " + v.market + ": expected " + std::to_string(kFactCount) + " verdicts");
      }
      for (std::size_t i = 0; i < kFactCount; ++i) v.verdicts[i] = arr[i].get<int>();
    } else {
      // Object keyed by fact id; missing facts count as 0.
      for (auto it = arr.begin(); it != arr.end(); ++it) {
        const auto f = fact_from_id(it.key());
        if (!f) fail(ErrorKind::Input, "unknown fact id: " + it.key());
        v.verdicts[static_cast<std::size_t>(*f)] = it.value().get<int>();
      }
    }
    for (int x : v.verdicts) {
      if (x < -1 || x > 1) fail(ErrorKind::Input, "market " + v.market + ": verdicts must be -1, 0 or 1");
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, std::string("summary document: ") + e.what());
  }
}

inline Json to_json(const DendrogramNode& n) {
  if (n.is_leaf()) return {{"id", n.id}, {"market", n.market}, {"height", 0.0}};
  return {{"id", n.id},
          {"height", n.height},
          {"members", n.members},
          {"children", Json::array({to_json(*n.left), to_json(*n.right)})}};
}

}  // namespace stylized
