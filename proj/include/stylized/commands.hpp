#pragma once

// Subcommand implementations behind the command-line tool. Each returns a
// process exit status: 0 success, 1 usage error, 2 input error, 3 numeric
// failure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stylized/battery.hpp"
#include "stylized/cluster.hpp"
#include "stylized/error.hpp"
#include "stylized/ingest.hpp"
#include "stylized/report.hpp"
#include "stylized/simulate.hpp"
#include "stylized/stats.hpp"

namespace stylized {

enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitNumeric = 3 };

inline int exit_status_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return kExitUsage;
    case ErrorKind::Format:
    case ErrorKind::Row:
    case ErrorKind::EmptySeries:
    case ErrorKind::Input: return kExitInput;
    default: return kExitNumeric;
  }
}

/// Runs a command body, mapping library errors to exit statuses.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

/// File-system-safe name: characters outside [A-Za-z0-9._-] become '_'.
inline std::string safe_name(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

inline std::filesystem::path market_dir(const std::filesystem::path& out, std::string_view market) {
  return out / safe_name(market);
}

// ---------------------------------------------------------------------------
// analyze

inline int run_analyze(const RunConfig& cfg_in, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    RunConfig cfg = cfg_in;
    apply_overrides(cfg.analysis.thresholds, cfg.threshold_overrides);
    validate(cfg);
    const auto markets = load_manifest(cfg.manifest);
    const std::string hash = config_hash(cfg.analysis);
    const auto manifest_dir = cfg.manifest.parent_path();

    // Read everything up front so an unreadable file fails before any output.
    struct Loaded {
      std::vector<PriceSeries> series;
      std::vector<std::size_t> dropped;
      std::vector<std::optional<std::string>> clean_error;
    };
    std::vector<Loaded> loaded(markets.size());
    Json inputs = Json::array();
    for (std::size_t m = 0; m < markets.size(); ++m) {
      for (const auto& e : markets[m].entries) {
        if (!std::filesystem::is_regular_file(e.path)) fail(ErrorKind::Input, "cannot read " + e.path.string());
        PriceSeries raw;
        try {
          raw = load_price_csv(e.path, e.ticker);
        } catch (const Error& ex) {
          fail(ex.kind(), e.path.string() + ": " + ex.what());
        }
        inputs.push_back({{"market", markets[m].market},
                          {"ticker", e.ticker},
                          {"path", std::filesystem::relative(e.path, manifest_dir).generic_string()},
                          {"sha256", sha256_file(e.path)}});
        try {
          auto c = clean(raw);
          loaded[m].series.push_back(std::move(c.series));
          loaded[m].dropped.push_back(c.dropped);
          loaded[m].clean_error.emplace_back();
        } catch (const Error& ex) {
          PriceSeries placeholder;
          placeholder.ticker = e.ticker;
          loaded[m].series.push_back(std::move(placeholder));
          loaded[m].dropped.push_back(raw.size());
          loaded[m].clean_error.emplace_back(std::string(to_string(ex.kind())) + ": " + ex.what());
        }
      }
    }

    Json market_list = Json::array();
    for (std::size_t m = 0; m < markets.size(); ++m) {
      auto& L = loaded[m];
      auto reports = analyze_stocks(L.series, cfg.analysis, cfg.workers);
      for (std::size_t i = 0; i < reports.size(); ++i) {
        reports[i].dropped_rows = L.dropped[i];
        if (L.clean_error[i]) {
          reports[i].skipped = *L.clean_error[i];
          reports[i].n_obs = 0;
        }
      }
      const auto dir = market_dir(cfg.output_dir, markets[m].market);
      for (const auto& r : reports) {
        Json doc;
        doc["schema"] = std::string(kSchemaVersion);
        doc["config_hash"] = hash;
        doc["market"] = markets[m].market;
        doc["report"] = to_json(r);
        write_text_file(dir / "stocks" / (safe_name(r.ticker) + ".json"), to_json_text(doc));
      }
      const auto summary = summarize_market(markets[m].market, reports, cfg.analysis);
      Json doc;
      doc["schema"] = std::string(kSchemaVersion);
      doc["config_hash"] = hash;
      Json body = to_json(summary);
      for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
      write_text_file(dir / "summary.json", to_json_text(doc));
      for (const auto& s : summary.skipped) err << "skipped " << markets[m].market << "/" << s << "\n";
      market_list.push_back({{"market", markets[m].market}, {"directory", safe_name(markets[m].market)},
                             {"stocks", reports.size()}});
    }

    Json run;
    run["schema"] = std::string(kSchemaVersion);
    run["config_hash"] = hash;
    run["config"] = analysis_config_json(cfg.analysis);
    run["manifest"] = cfg.manifest.filename().generic_string();
    run["manifest_sha256"] = sha256_file(cfg.manifest);
    run["markets"] = market_list;
    run["inputs"] = inputs;
    write_text_file(cfg.output_dir / "run.json", to_json_text(run));
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// cluster

/// Summary files found under an analyze output directory, sorted.
inline std::vector<std::filesystem::path> find_summaries(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) fail(ErrorKind::Input, "not a directory: " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory() && std::filesystem::is_regular_file(e.path() / "summary.json")) {
      out.push_back(e.path() / "summary.json");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int run_cluster(const std::vector<std::filesystem::path>& summaries, const std::filesystem::path& out_dir,
                       std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (summaries.size() < 2) {
      err << "error: cluster needs at least 2 market summaries, got " << summaries.size() << "\n";
      return static_cast<int>(kExitInput);
    }
    std::vector<MarketVerdictVector> vectors;
    std::set<std::string> hashes;
    for (const auto& p : summaries) {
      const auto j = read_json_file(p);
      vectors.push_back(verdict_vector_from_json(j));
      hashes.insert(j.contains("config_hash") ? j["config_hash"].get<std::string>() : std::string("unspecified"));
    }
    const auto d = cluster_markets(vectors);
    std::string hash;
    if (hashes.size() == 1) {
      hash = *hashes.begin();
    } else {
      hash = "mixed";
      for (const auto& h : hashes) hash += ":" + h;
      err << "warning: summaries come from " << hashes.size() << " different configurations\n";
    }

    Json doc;
    doc["schema"] = std::string(kSchemaVersion);
    doc["config_hash"] = hash;
    doc["metric"] = "l1";
    doc["linkage"] = "average";
    doc["leaves"] = d.leaves;
    doc["root"] = to_json(*d.root);
    write_text_file(out_dir / "dendrogram.json", to_json_text(doc));

    CsvTable merges({"step", "left", "right", "id", "height", "size", "members"});
    for (const auto& m : d.merges) {
      std::string members;
      for (const auto& s : m.members) members += (members.empty() ? "" : ";") + s;
      merges.add_row({std::to_string(m.step), std::to_string(m.left), std::to_string(m.right), std::to_string(m.id),
                      format_number(m.height), std::to_string(m.size), members});
    }
    write_text_file(out_dir / "merges.csv", merges.str(hash));
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// plot-data

inline const std::vector<std::string>& plot_kinds() {
  static const std::vector<std::string> kinds{"prices", "qq", "ccf", "acf", "kde", "boxplot"};
  return kinds;
}

/// Statistics available to `boxplot`, as JSON pointers into a stock report.
inline const std::map<std::string, std::string>& boxplot_statistics() {
  static const std::map<std::string, std::string> stats{
      {"skewness", "/return_moments/skewness"},
      {"kurtosis", "/return_moments/kurtosis"},
      {"leverage_corr", "/leverage_corr"},
      {"alpha", "/tail/alpha"},
      {"volume_alpha", "/volume_tail/alpha"},
      {"volume_volatility_corr", "/volume_volatility_corr"},
      {"hurst", "/hurst/H"},
      {"volume_hurst", "/volume_hurst/H"},
      {"beta", "/acf_decay/beta"},
      {"d_star", "/taylor/d_star"},
      {"garch_alpha1", "/garch/alpha1"},
      {"garch_beta1", "/garch/beta1"},
  };
  return stats;
}

struct PlotRequest {
  std::filesystem::path output_dir = "out";  ///< analyze output directory
  std::filesystem::path manifest;            ///< needed by series kinds
  std::string kind;
  std::string target;
};

namespace detail {

struct RunInfo {
  AnalysisConfig analysis;
  std::string hash;
};

inline RunInfo load_run(const std::filesystem::path& out) {
  const auto path = out / "run.json";
  if (!std::filesystem::is_regular_file(path)) {
    fail(ErrorKind::Input, "no analyze output at " + out.string() + " (missing run.json)");
  }
  const auto j = read_json_file(path);
  try {
    return {analysis_config_from_json(j.at("config")), j.at("config_hash").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, path.string() + ": " + e.what());
  }
}

/// Locates "TICKER" or "MARKET/TICKER" in the manifest and returns its
/// cleaned price series.
inline PriceSeries find_series(const std::filesystem::path& manifest, const std::string& target) {
  if (manifest.empty()) fail(ErrorKind::InvalidArgument, "this plot kind needs --manifest");
  const auto markets = load_manifest(manifest);
  std::string want_market, want_ticker = target;
  if (const auto slash = target.find('/'); slash != std::string::npos) {
    want_market = target.substr(0, slash);
    want_ticker = target.substr(slash + 1);
  }
  std::vector<const ManifestEntry*> hits;
  for (const auto& m : markets) {
    if (!want_market.empty() && m.market != want_market) continue;
    for (const auto& e : m.entries) {
      if (e.ticker == want_ticker) hits.push_back(&e);
    }
  }
  if (hits.empty()) fail(ErrorKind::Input, "ticker not found in manifest: " + target);
  if (hits.size() > 1) fail(ErrorKind::Input, "ticker is ambiguous, use MARKET/TICKER: " + target);
  return clean(load_price_csv(hits.front()->path, hits.front()->ticker)).series;
}

inline std::optional<double> number_at(const Json& doc, const std::string& pointer) {
  const Json::json_pointer p(pointer);
  if (!doc.contains(p)) return std::nullopt;
  const auto& v = doc.at(p);
  if (!v.is_number()) return std::nullopt;
  return v.get<double>();
}

/// Stock report documents per market directory, in name order.
inline std::vector<std::pair<std::string, std::vector<Json>>> load_market_reports(const std::filesystem::path& out) {
  std::vector<std::pair<std::string, std::vector<Json>>> result;
  for (const auto& summary : find_summaries(out)) {
    const auto dir = summary.parent_path();
    const auto sj = read_json_file(summary);
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir / "stocks")) {
      for (const auto& e : std::filesystem::directory_iterator(dir / "stocks")) {
        if (e.path().extension() == ".json") files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<Json> docs;
    for (const auto& f : files) docs.push_back(read_json_file(f).at("report"));
    result.emplace_back(sj.at("market").get<std::string>(), std::move(docs));
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

inline std::string cell(double x) { return format_number(x); }

}  // namespace detail

/// Writes plot data for one kind and returns the files written.
inline std::vector<std::filesystem::path> plot_data(const PlotRequest& req) {
  const auto& kinds = plot_kinds();
  if (std::find(kinds.begin(), kinds.end(), req.kind) == kinds.end()) {
    std::string valid;
    for (const auto& k : kinds) valid += (valid.empty() ? "" : ", ") + k;
    fail(ErrorKind::InvalidArgument, "unknown plot kind '" + req.kind + "'; valid kinds: " + valid);
  }
  const auto run = detail::load_run(req.output_dir);
  const auto& a = run.analysis;
  const auto plots = req.output_dir / "plots";
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const CsvTable& t) {
    const auto path = plots / name;
    write_text_file(path, t.str(run.hash));
    written.push_back(path);
  };
  using detail::cell;

  if (req.kind == "prices" || req.kind == "qq" || req.kind == "ccf" || req.kind == "acf") {
    if (req.target.empty()) fail(ErrorKind::InvalidArgument, req.kind + " needs --target TICKER");
    const auto series = detail::find_series(req.manifest, req.target);
    const std::string stem = safe_name(series.ticker);
    const auto daily = log_returns(series, 1, true).values;

    if (req.kind == "prices") {
      CsvTable t({"date", "close", "log_return"});
      for (std::size_t i = 0; i < series.size(); ++i) {
        t.add_row({format_date(series.records[i].date), cell(series.records[i].close),
                   i == 0 ? std::string() : cell(daily[i - 1])});
      }
      emit("prices_" + stem + ".csv", t);
    } else if (req.kind == "qq") {
      for (int h : a.horizons) {
        const auto r = log_returns(series, h, a.overlapping).values;
        CsvTable t({"theoretical", "empirical"});
        for (const auto& q : qq_pairs(r)) t.add_row({cell(q.theoretical), cell(q.empirical)});
        emit("qq_" + stem + "_h" + std::to_string(h) + ".csv", t);
      }
    } else if (req.kind == "ccf") {
      for (std::size_t w : a.asymmetry_windows) {
        AsymmetryResult res;
        try {
          res = asymmetry_timescales(daily, w);
        } catch (const Error& e) {
          // short series: keep the windows that fit
          if (e.kind() != ErrorKind::InsufficientData || w == a.asymmetry_windows.front()) throw;
          continue;
        }
        CsvTable t({"series", "lag", "value", "band_lower", "band_upper"});
        for (const auto& [h, c] : res.C) t.add_row({"ccf", std::to_string(h), cell(c), "", ""});
        for (std::size_t l = 0; l < res.diffs.size(); ++l) {
          t.add_row({"diff", std::to_string(l + 1), cell(res.diffs[l]), cell(-res.bands[l]), cell(res.bands[l])});
        }
        emit("ccf_" + stem + "_w" + std::to_string(w) + ".csv", t);
      }
    } else {
      const std::size_t L = a.acf_decay_max_lag;
      std::vector<double> abs_r(daily.size()), sq(daily.size());
      for (std::size_t i = 0; i < daily.size(); ++i) {
        abs_r[i] = std::fabs(daily[i]);
        sq[i] = daily[i] * daily[i];
      }
      const auto r1 = acf(daily, L);
      const auto r2 = acf(abs_r, L);
      const auto r3 = acf(sq, L);
      const double band = 1.96 / std::sqrt(static_cast<double>(daily.size()));
      CsvTable t({"lag", "acf_returns", "acf_abs_returns", "acf_squared_returns", "band"});
      for (std::size_t l = 1; l <= L; ++l) t.add_row({std::to_string(l), cell(r1[l]), cell(r2[l]), cell(r3[l]), cell(band)});
      emit("acf_" + stem + ".csv", t);
    }
    return written;
  }

  const auto markets = detail::load_market_reports(req.output_dir);
  if (req.kind == "kde") {
    const std::string test = req.target.empty() ? "ks" : req.target;
    if (test != "ks" && test != "sw" && test != "jb") {
      fail(ErrorKind::InvalidArgument, "kde target must be one of ks, sw, jb");
    }
    std::vector<double> grid(101);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 100.0;
    CsvTable t({"market", "horizon", "n", "p_value", "density"});
    for (const auto& [market, docs] : markets) {
      for (int h : a.horizons) {
        std::vector<double> p;
        for (const auto& d : docs) {
          if (!d.contains("normality")) continue;
          for (const auto& nh : d["normality"]) {
            if (nh["horizon"].get<int>() != h || nh["overlapping"].get<bool>() != a.overlapping) continue;
            if (const auto v = detail::number_at(nh, "/" + test + "/p_value")) p.push_back(*v);
          }
        }
        if (p.size() < 2) continue;
        std::vector<double> dens;
        try {
          dens = kde(p, grid);
        } catch (const Error&) {
          continue;
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
          t.add_row({market, std::to_string(h), std::to_string(p.size()), cell(grid[i]), cell(dens[i])});
        }
      }
    }
    emit("kde_" + test + ".csv", t);
    return written;
  }

  // boxplot
  const auto& stats = boxplot_statistics();
  const std::string stat = req.target.empty() ? "skewness" : req.target;
  const auto it = stats.find(stat);
  if (it == stats.end()) {
    std::string valid;
    for (const auto& [k, v] : stats) valid += (valid.empty() ? "" : ", ") + k;
    fail(ErrorKind::InvalidArgument, "unknown boxplot statistic '" + stat + "'; valid: " + valid);
  }
  CsvTable t({"market", "n", "min", "q1", "median", "q3", "max"});
  for (const auto& [market, docs] : markets) {
    std::vector<double> v;
    for (const auto& d : docs) {
      if (const auto x = detail::number_at(d, it->second)) v.push_back(*x);
    }
    if (v.size() >= 5) {
      const auto f = five_number(v);
      t.add_row({market, std::to_string(v.size()), cell(f.min), cell(f.q1), cell(f.median), cell(f.q3), cell(f.max)});
    } else {
      t.add_row({market, std::to_string(v.size()), "", "", "", "", ""});
    }
  }
  emit("boxplot_" + stat + ".csv", t);
  return written;
}

inline int run_plot_data(const PlotRequest& req, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    for (const auto& p : plot_data(req)) out << p.string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// report

inline std::string render_report(const std::filesystem::path& out_dir) {
  const auto run = detail::load_run(out_dir);
  std::vector<Json> summaries;
  for (const auto& p : find_summaries(out_dir)) summaries.push_back(read_json_file(p));
  std::sort(summaries.begin(), summaries.end(),
            [](const Json& a, const Json& b) { return a["market"].get<std::string>() < b["market"].get<std::string>(); });

  auto sym = [](int v) { return v > 0 ? std::string("+1") : (v < 0 ? std::string("-1") : std::string("0")); };
  std::ostringstream os;
  os << "# Stylized facts report\n\n";
  os << "config_hash: `" << run.hash << "`\n\n";
  os << "## Verdicts\n\n| Fact |";
  for (const auto& s : summaries) os << " " << s["market"].get<std::string>() << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < summaries.size(); ++i) os << "---|";
  os << "\n";
  for (Fact f : kAllFacts) {
    os << "| " << fact_title(f) << " |";
    for (const auto& s : summaries) os << " " << sym(s["verdicts"][static_cast<std::size_t>(f)].get<int>()) << " |";
    os << "\n";
  }
  for (const auto& s : summaries) {
    os << "\n## " << s["market"].get<std::string>() << "\n\n";
    os << "Stocks: " << s["n_stocks"].get<std::size_t>() << ", analysed: " << s["n_analyzed"].get<std::size_t>()
       << "\n\n";
    for (const auto& sk : s["skipped"]) os << "- skipped " << sk.get<std::string>() << "\n";
    os << "| Fact | Verdict | Statistic | Value | Support | Rule |\n|---|---|---|---|---|---|\n";
    for (const auto& f : s["facts"]) {
      const auto& st = f["statistic"];
      os << "| " << f["title"].get<std::string>() << " | " << sym(f["verdict"].get<int>()) << " | "
         << f["statistic_name"].get<std::string>() << " | "
         << (st.is_number() ? format_number(st.get<double>()) : std::string("n/a")) << " | "
         << f["support"].get<std::size_t>() << (f["low_support"].get<bool>() ? " (low)" : "") << " | "
         << f["rule"].get<std::string>();
      if (f.contains("reason")) os << " (" << f["reason"].get<std::string>() << ")";
      os << " |\n";
    }
  }
  const auto dendro = out_dir / "dendrogram.json";
  if (std::filesystem::is_regular_file(dendro)) {
    os << "\n## Clustering\n\nMerges (L1 distance, average linkage):\n\n";
    const auto merges = out_dir / "merges.csv";
    if (std::filesystem::is_regular_file(merges)) {
      std::istringstream in(read_text_file(merges));
      std::string line;
      std::getline(in, line);  // hash
      std::getline(in, line);  // header
      while (std::getline(in, line)) os << "- " << line << "\n";
    }
  }
  return os.str();
}

inline int run_report(const std::filesystem::path& out_dir, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    write_text_file(out_dir / "report.md", render_report(out_dir));
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateRequest {
  std::filesystem::path output_dir = "synthetic";
  std::size_t markets = 2;
  std::size_t stocks = 5;
  std::size_t length = 2500;
  std::uint64_t seed = 42;
};

/// Writes GARCH(1,1) price CSVs and a manifest referencing them.
inline void simulate_market_files(const SimulateRequest& req) {
  if (req.markets == 0 || req.stocks == 0 || req.length < 10) {
    fail(ErrorKind::InvalidArgument, "simulate needs markets >= 1, stocks >= 1, length >= 10");
  }
  std::mt19937_64 rng(req.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Json markets = Json::array();
  for (std::size_t m = 0; m < req.markets; ++m) {
    const std::string market = "SIM" + std::to_string(m + 1);
    Json stocks = Json::array();
    for (std::size_t s = 0; s < req.stocks; ++s) {
      const std::string ticker = market + "_S" + std::to_string(s + 1);
      const double alpha1 = 0.05 + 0.07 * u(rng);
      const double beta1 = 0.80 + (0.93 - alpha1 - 0.80) * u(rng);
      const double omega = 2e-6 + 4e-6 * u(rng);
      const std::uint64_t stock_seed = rng();
      const auto r = simulate_garch11({2e-4, omega, alpha1, beta1}, req.length - 1, stock_seed);
      const auto series = synthetic_price_series(ticker, r, stock_seed);
      std::ostringstream csv;
      csv << "Date,Close,Volume\n";
      for (const auto& rec : series.records) {
        csv << format_date(rec.date) << "," << format_number(rec.close) << "," << format_number(rec.volume) << "\n";
      }
      const auto rel = std::filesystem::path("data") / market / (ticker + ".csv");
      write_text_file(req.output_dir / rel, csv.str());
      stocks.push_back({{"ticker", ticker}, {"path", rel.generic_string()}});
    }
    markets.push_back({{"name", market}, {"stocks", stocks}});
  }
  write_text_file(req.output_dir / "manifest.json", to_json_text(Json{{"markets", markets}}));
}

inline int run_simulate(const SimulateRequest& req, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    simulate_market_files(req);
    return static_cast<int>(kExitOk);
  });
}

}  // namespace stylized
