#pragma once

// Per-stock fact battery and per-market aggregation into {-1, 0, +1} verdicts.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "stylized/error.hpp"
#include "stylized/garch.hpp"
#include "stylized/ingest.hpp"
#include "stylized/long_memory.hpp"
#include "stylized/normality.hpp"
#include "stylized/outcome.hpp"
#include "stylized/serial_dependence.hpp"
#include "stylized/stats.hpp"
#include "stylized/tail_index.hpp"
#include "stylized/taylor.hpp"

namespace stylized {

/// The sixteen facts, in summary-table order.
enum class Fact : int {
  GainLossAsymmetry,
  LeverageEffect,
  AggregationalGaussianity,
  HeavyTails,
  VolumePowerLaw,
  VolumeVolatilityCorrelation,
  RiskReturnTradeoff,
  TimeScaleAsymmetry,
  LongMemory,
  VolumeLongMemory,
  SlowAcfDecay,
  AbsenceOfAutocorrelation,
  VolatilityClustering,
  ConditionalHeavyTails,
  Intermittency,
  TaylorEffect,
};

inline constexpr std::size_t kFactCount = 16;

inline constexpr std::array<Fact, kFactCount> kAllFacts{
    Fact::GainLossAsymmetry,        Fact::LeverageEffect,     Fact::AggregationalGaussianity,
    Fact::HeavyTails,               Fact::VolumePowerLaw,     Fact::VolumeVolatilityCorrelation,
    Fact::RiskReturnTradeoff,       Fact::TimeScaleAsymmetry, Fact::LongMemory,
    Fact::VolumeLongMemory,         Fact::SlowAcfDecay,       Fact::AbsenceOfAutocorrelation,
    Fact::VolatilityClustering,     Fact::ConditionalHeavyTails, Fact::Intermittency,
    Fact::TaylorEffect,
};

constexpr std::string_view fact_id(Fact f) {
  switch (f) {
    case Fact::GainLossAsymmetry: return "gain_loss_asymmetry";
    case Fact::LeverageEffect: return "leverage_effect";
    case Fact::AggregationalGaussianity: return "aggregational_gaussianity";
    case Fact::HeavyTails: return "heavy_tails";
    case Fact::VolumePowerLaw: return "volume_power_law";
    case Fact::VolumeVolatilityCorrelation: return "volume_volatility_correlation";
    case Fact::RiskReturnTradeoff: return "risk_return_tradeoff";
    case Fact::TimeScaleAsymmetry: return "time_scale_asymmetry";
    case Fact::LongMemory: return "long_memory";
    case Fact::VolumeLongMemory: return "volume_long_memory";
    case Fact::SlowAcfDecay: return "slow_acf_decay";
    case Fact::AbsenceOfAutocorrelation: return "absence_of_autocorrelation";
    case Fact::VolatilityClustering: return "volatility_clustering";
    case Fact::ConditionalHeavyTails: return "conditional_heavy_tails";
    case Fact::Intermittency: return "intermittency";
    case Fact::TaylorEffect: return "taylor_effect";
  }
  return "unknown";
}

constexpr std::string_view fact_title(Fact f) {
  switch (f) {
    case Fact::GainLossAsymmetry: return "Gain loss asymmetry";
    case Fact::LeverageEffect: return "Leverage effect";
    case Fact::AggregationalGaussianity: return "Aggregational Gaussianity";
    case Fact::HeavyTails: return "Heavy tails";
    case Fact::VolumePowerLaw: return "Decay of volume distribution as power law";
    case Fact::VolumeVolatilityCorrelation: return "Volume-volatility correlation";
    case Fact::RiskReturnTradeoff: return "Risk-return tradeoff";
    case Fact::TimeScaleAsymmetry: return "Asymmetry in time scales";
    case Fact::LongMemory: return "Long memory";
    case Fact::VolumeLongMemory: return "Long memory in volume";
    case Fact::SlowAcfDecay: return "Slow decay of autocorrelation of absolute returns";
    case Fact::AbsenceOfAutocorrelation: return "Absence of autocorrelation";
    case Fact::VolatilityClustering: return "Volatility clustering";
    case Fact::ConditionalHeavyTails: return "Conditional heavy tails";
    case Fact::Intermittency: return "Intermittency";
    case Fact::TaylorEffect: return "Taylor effect";
  }
  return "unknown";
}

inline std::optional<Fact> fact_from_id(std::string_view id) {
  for (Fact f : kAllFacts) {
    if (fact_id(f) == id) return f;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

/// Cut-points for the verdict rules. Each one is addressable by name so a
/// run can override it from a config file.
struct VerdictThresholds {
  double gain_loss_share = 0.60;
  double leverage_verified = 0.54;
  double leverage_contradicted = 0.37;
  double heavy_tail_share = 0.75;
  double heavy_tail_alpha_lo = 2.0;
  double heavy_tail_alpha_hi = 5.0;
  double volume_power_law_share = 1.0;
  double volume_volatility_verified = 0.95;
  double volume_volatility_contradicted = 0.50;
  double risk_return_band = 0.10;
  double time_scale_share = 0.60;
  double long_memory_share = 0.50;
  double long_memory_h_lo = 0.55;
  double long_memory_h_hi = 0.60;
  double volume_long_memory_share = 1.0;
  double acf_decay_share = 0.50;
  double acf_decay_beta_lo = 0.2;
  double acf_decay_beta_hi = 0.4;
  double absence_verified = 0.50;
  double absence_contradicted = 0.40;
  double clustering_share = 0.80;
  double conditional_verified = 0.70;
  double conditional_contradicted = 0.51;
  double intermittency_share = 0.80;
  double taylor_d_lo = 0.6;
  double taylor_d_hi = 1.4;
  double low_support_min = 3.0;
};

inline constexpr std::array<std::pair<std::string_view, double VerdictThresholds::*>, 27> kThresholdFields{{
    {"gain_loss_share", &VerdictThresholds::gain_loss_share},
    {"leverage_verified", &VerdictThresholds::leverage_verified},
    {"leverage_contradicted", &VerdictThresholds::leverage_contradicted},
    {"heavy_tail_share", &VerdictThresholds::heavy_tail_share},
    {"heavy_tail_alpha_lo", &VerdictThresholds::heavy_tail_alpha_lo},
    {"heavy_tail_alpha_hi", &VerdictThresholds::heavy_tail_alpha_hi},
    {"volume_power_law_share", &VerdictThresholds::volume_power_law_share},
    {"volume_volatility_verified", &VerdictThresholds::volume_volatility_verified},
    {"volume_volatility_contradicted", &VerdictThresholds::volume_volatility_contradicted},
    {"risk_return_band", &VerdictThresholds::risk_return_band},
    {"time_scale_share", &VerdictThresholds::time_scale_share},
    {"long_memory_share", &VerdictThresholds::long_memory_share},
    {"long_memory_h_lo", &VerdictThresholds::long_memory_h_lo},
    {"long_memory_h_hi", &VerdictThresholds::long_memory_h_hi},
    {"volume_long_memory_share", &VerdictThresholds::volume_long_memory_share},
    {"acf_decay_share", &VerdictThresholds::acf_decay_share},
    {"acf_decay_beta_lo", &VerdictThresholds::acf_decay_beta_lo},
    {"acf_decay_beta_hi", &VerdictThresholds::acf_decay_beta_hi},
    {"absence_verified", &VerdictThresholds::absence_verified},
    {"absence_contradicted", &VerdictThresholds::absence_contradicted},
    {"clustering_share", &VerdictThresholds::clustering_share},
    {"conditional_verified", &VerdictThresholds::conditional_verified},
    {"conditional_contradicted", &VerdictThresholds::conditional_contradicted},
    {"intermittency_share", &VerdictThresholds::intermittency_share},
    {"taylor_d_lo", &VerdictThresholds::taylor_d_lo},
    {"taylor_d_hi", &VerdictThresholds::taylor_d_hi},
    {"low_support_min", &VerdictThresholds::low_support_min},
}};

/// Applies name -> value overrides; unknown names are an error.
inline void apply_overrides(VerdictThresholds& t, const std::map<std::string, double>& overrides) {
  for (const auto& [name, value] : overrides) {
    const auto it = std::find_if(kThresholdFields.begin(), kThresholdFields.end(),
                                 [&](const auto& f) { return f.first == name; });
    if (it == kThresholdFields.end()) fail(ErrorKind::InvalidArgument, "unknown verdict threshold: " + name);
    t.*(it->second) = value;
  }
}

struct AnalysisConfig {
  std::vector<int> horizons{1, 5, 20, 60};
  bool overlapping = true;
  double significance = 0.05;
  std::size_t absence_lag = 10;
  std::size_t clustering_lag = 5;
  std::size_t single_lag_max = 5;
  std::size_t acf_decay_max_lag = 30;
  std::vector<std::size_t> asymmetry_windows{5, 20};
  std::size_t min_observations = 500;
  TailIndexOptions tail{};
  TaylorOptions taylor{};
  VerdictThresholds thresholds{};
};

// ---------------------------------------------------------------------------
// Per-stock report

struct NormalityAtHorizon {
  int horizon = 1;
  bool overlapping = true;
  std::size_t n = 0;
  Outcome<TestResult> ks;
  Outcome<TestResult> sw;
  Outcome<TestResult> jb;
};

struct StockFactReport {
  std::string ticker;
  std::size_t n_obs = 0;
  std::size_t dropped_rows = 0;
  /// Set when the stock was not analysed at all.
  std::optional<std::string> skipped;

  Outcome<MomentSummary> return_moments;
  Outcome<double> mean_return;
  Outcome<double> sd_return;
  Outcome<double> leverage_corr;
  std::vector<NormalityAtHorizon> normality;  ///< overlapping first, then non-overlapping
  Outcome<TailIndexResult> tail;
  Outcome<TailIndexResult> volume_tail;
  Outcome<double> volume_volatility_corr;  ///< corr(volume, r^2)
  Outcome<double> volume_return_corr;      ///< corr(volume, r)
  std::map<std::size_t, Outcome<AsymmetryResult>> asymmetry;
  Outcome<HurstResult> hurst;
  Outcome<HurstResult> volume_hurst;
  Outcome<AcfDecayFit> acf_decay;
  Outcome<PortmanteauResult> absence_lb;
  Outcome<PortmanteauResult> absence_bp;
  Outcome<PortmanteauResult> clustering_lb;
  Outcome<PortmanteauResult> clustering_bp;
  std::vector<Outcome<SingleLagTests>> clustering_single;
  Outcome<GarchFit> garch;
  Outcome<ConditionalTailComparison> conditional_tail;
  Outcome<KurtosisTestResult> kurtosis_returns;
  Outcome<KurtosisTestResult> kurtosis_residuals;
  Outcome<TaylorResult> taylor;

  [[nodiscard]] const NormalityAtHorizon* normality_at(int horizon, bool overlapping) const {
    for (const auto& n : normality) {
      if (n.horizon == horizon && n.overlapping == overlapping) return &n;
    }
    return nullptr;
  }
};

/// Runs every per-stock analysis on a cleaned series. Individual failures
/// become NotEvaluable entries; the report itself is always returned.
inline StockFactReport analyze_stock(const PriceSeries& series, const AnalysisConfig& cfg = {}) {
  StockFactReport rep;
  rep.ticker = series.ticker;
  rep.n_obs = series.size();
  if (series.size() < cfg.min_observations) {
    rep.skipped = "series has " + std::to_string(series.size()) + " observations, minimum is " +
                  std::to_string(cfg.min_observations);
    return rep;
  }

  const auto daily = log_returns(series, 1, true).values;
  std::vector<double> squared(daily.size());
  for (std::size_t i = 0; i < daily.size(); ++i) squared[i] = daily[i] * daily[i];
  const auto volume = volume_values(series);
  const std::span<const double> volume_aligned(volume.data() + 1, daily.size());

  rep.return_moments = evaluate([&] { return moments(daily); });
  rep.mean_return = evaluate([&] { return mean(daily); });
  rep.sd_return = evaluate([&] {
    const double sd = std::sqrt(variance(daily));
    if (!(sd > 0.0)) fail(ErrorKind::Degenerate, "zero return variance");
    return sd;
  });
  rep.leverage_corr = evaluate([&] { return pearson_corr(daily, squared); });

  for (bool overlapping : {true, false}) {
    for (int h : cfg.horizons) {
      NormalityAtHorizon nh;
      nh.horizon = h;
      nh.overlapping = overlapping;
      const auto ret = evaluate([&] { return log_returns(series, h, overlapping); });
      if (!ret) {
        nh.ks = nh.sw = nh.jb = NotEvaluable{ret.reason()};
      } else {
        const auto& v = ret->values;
        nh.n = v.size();
        nh.ks = evaluate([&] { return ks_normality(v); });
        nh.sw = evaluate([&] { return shapiro_wilk(v); });
        nh.jb = evaluate([&] { return jarque_bera(v); });
      }
      rep.normality.push_back(std::move(nh));
    }
  }

  rep.tail = evaluate([&] { return return_tail_index(daily, TailSide::Pooled, cfg.tail); });
  rep.volume_tail = evaluate([&] { return adaptive_tail_index(volume, cfg.tail); });
  rep.volume_volatility_corr = evaluate([&] { return pearson_corr(volume_aligned, squared); });
  rep.volume_return_corr = evaluate([&] { return pearson_corr(volume_aligned, daily); });

  for (std::size_t w : cfg.asymmetry_windows) {
    rep.asymmetry.emplace(w, evaluate([&] { return asymmetry_timescales(daily, w); }));
  }
  rep.hurst = evaluate([&] { return hurst(daily); });
  rep.volume_hurst = evaluate([&] { return hurst(volume); });
  rep.acf_decay = evaluate([&] { return acf_power_law_fit(daily, cfg.acf_decay_max_lag); });

  rep.absence_lb = evaluate([&] { return ljung_box(daily, cfg.absence_lag); });
  rep.absence_bp = evaluate([&] { return box_pierce(daily, cfg.absence_lag); });
  rep.clustering_lb = evaluate([&] { return ljung_box(squared, cfg.clustering_lag); });
  rep.clustering_bp = evaluate([&] { return box_pierce(squared, cfg.clustering_lag); });
  for (std::size_t lag = 1; lag <= cfg.single_lag_max; ++lag) {
    rep.clustering_single.push_back(evaluate([&] { return single_lag_tests(squared, lag); }));
  }

  rep.garch = evaluate([&] { return garch11_fit(daily); });
  if (rep.garch) {
    rep.conditional_tail = evaluate([&] { return conditional_tail_comparison(daily, *rep.garch, cfg.tail); });
    if (rep.garch->converged) {
      rep.kurtosis_residuals = evaluate([&] { return kurtosis_test(standardized_residuals(daily, *rep.garch).values); });
    } else {
      rep.kurtosis_residuals = NotEvaluable{"not-converged: GARCH fit did not converge"};
    }
  } else {
    rep.conditional_tail = NotEvaluable{rep.garch.reason()};
    rep.kurtosis_residuals = NotEvaluable{rep.garch.reason()};
  }
  rep.kurtosis_returns = evaluate([&] { return kurtosis_test(daily); });
  rep.taylor = evaluate([&] { return maximize_taylor_d(daily, cfg.taylor); });
  return rep;
}

/// Analyses each series on up to `workers` threads. Results are stored by
/// input position, so the output does not depend on scheduling.
inline std::vector<StockFactReport> analyze_stocks(std::span<const PriceSeries> series, const AnalysisConfig& cfg,
                                                   std::size_t workers = 1) {
  std::vector<StockFactReport> out(series.size());
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(series.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = analyze_stock(series[i], cfg);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < series.size(); i = next++) out[i] = analyze_stock(series[i], cfg);
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Market aggregation

struct FactVerdict {
  Fact fact = Fact::GainLossAsymmetry;
  int verdict = 0;
  /// Name and value of the aggregate the rule is applied to.
  std::string statistic_name;
  double statistic = std::nan("");
  /// Further aggregates reported for the fact (proportions, medians, ...).
  std::map<std::string, double> aggregates;
  std::size_t support = 0;
  bool low_support = false;
  std::string rule;
  std::optional<std::string> reason;
};

struct MarketFactSummary {
  std::string market;
  std::size_t n_stocks = 0;
  std::size_t n_analyzed = 0;
  std::vector<std::string> skipped;  ///< "ticker: reason"
  std::vector<FactVerdict> facts;    ///< kFactCount entries in Fact order
  Outcome<double> risk_return_corr;

  [[nodiscard]] const FactVerdict& at(Fact f) const { return facts.at(static_cast<std::size_t>(f)); }
};

struct MarketVerdictVector {
  std::string market;
  std::array<int, kFactCount> verdicts{};
};

inline MarketVerdictVector verdict_vector(const MarketFactSummary& s) {
  MarketVerdictVector v;
  v.market = s.market;
  for (std::size_t i = 0; i < kFactCount && i < s.facts.size(); ++i) v.verdicts[i] = s.facts[i].verdict;
  return v;
}

/// Pearson correlation across stocks of (mean daily return, sd of daily returns).
inline Outcome<double> risk_return_correlation(std::span<const StockFactReport> reports) {
  std::vector<double> means, sds;
  for (const auto& r : reports) {
    if (r.skipped || !r.mean_return || !r.sd_return) continue;
    means.push_back(*r.mean_return);
    sds.push_back(*r.sd_return);
  }
  if (means.size() < 3) return NotEvaluable{"fewer than 3 evaluable stocks"};
  return evaluate([&] { return pearson_corr(means, sds); });
}

namespace detail {

/// Proportion of stocks whose value (when evaluable) satisfies `pred`.
template <class Get, class Pred>
std::pair<double, std::size_t> share(std::span<const StockFactReport> reports, Get get, Pred pred) {
  std::size_t support = 0, hits = 0;
  for (const auto& r : reports) {
    if (r.skipped) continue;
    const auto v = get(r);
    if (!v) continue;
    ++support;
    hits += pred(*v) ? 1 : 0;
  }
  return {support == 0 ? std::nan("") : static_cast<double>(hits) / static_cast<double>(support), support};
}

template <class Get>
std::vector<double> collect(std::span<const StockFactReport> reports, Get get) {
  std::vector<double> out;
  for (const auto& r : reports) {
    if (r.skipped) continue;
    if (const auto v = get(r)) out.push_back(*v);
  }
  return out;
}

template <class T>
std::optional<T> opt(const Outcome<T>& o) {
  if (o) return *o;
  return std::nullopt;
}

inline FactVerdict make_verdict(Fact f, std::string name, double stat, std::size_t support, std::string rule,
                                const VerdictThresholds& t) {
  FactVerdict v;
  v.fact = f;
  v.statistic_name = std::move(name);
  v.statistic = stat;
  v.support = support;
  v.rule = std::move(rule);
  v.low_support = static_cast<double>(support) < t.low_support_min;
  if (support == 0 || !std::isfinite(stat)) {
    v.verdict = 0;
    v.reason = "no evaluable stocks";
  }
  return v;
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace detail

/// Applies the fixed verdict rules to a market's stock reports. Every verdict
/// stores the aggregate it was computed from and the rule text.
inline MarketFactSummary summarize_market(std::string market, std::span<const StockFactReport> reports,
                                          const AnalysisConfig& cfg = {}) {
  using detail::fmt;
  using detail::make_verdict;
  using detail::opt;
  using detail::share;
  const auto& t = cfg.thresholds;
  const double alpha = cfg.significance;

  MarketFactSummary s;
  s.market = std::move(market);
  s.n_stocks = reports.size();
  for (const auto& r : reports) {
    if (r.skipped) {
      s.skipped.push_back(r.ticker + ": " + *r.skipped);
    } else {
      ++s.n_analyzed;
    }
  }
  std::sort(s.skipped.begin(), s.skipped.end());
  auto set = [](FactVerdict& v, bool verified, bool contradicted) {
    if (v.reason) return;
    v.verdict = verified ? 1 : (contradicted ? -1 : 0);
  };

  // Gain/loss asymmetry: share of negative vs positive skewness.
  {
    auto skew = [](const StockFactReport& r) -> std::optional<double> {
      if (!r.return_moments) return std::nullopt;
      return r.return_moments->skewness;
    };
    const auto [neg, support] = share(reports, skew, [](double x) { return x < 0.0; });
    const auto [pos, support2] = share(reports, skew, [](double x) { return x > 0.0; });
    (void)support2;
    auto v = make_verdict(Fact::GainLossAsymmetry, "share_negative_skewness", neg, support,
                          "+1 if share(skew<0) >= " + fmt(t.gain_loss_share) + "; -1 if share(skew>0) >= " +
                              fmt(t.gain_loss_share),
                          t);
    v.aggregates["share_positive_skewness"] = pos;
    const auto vals = detail::collect(reports, skew);
    if (!vals.empty()) v.aggregates["median_skewness"] = median(vals);
    set(v, neg >= t.gain_loss_share, pos >= t.gain_loss_share);
    s.facts.push_back(std::move(v));
  }
  // Leverage: share with corr(r, r^2) < 0.
  {
    const auto [p, support] =
        share(reports, [](const StockFactReport& r) { return opt(r.leverage_corr); }, [](double x) { return x < 0.0; });
    auto v = make_verdict(Fact::LeverageEffect, "share_negative_corr_r_r2", p, support,
                          "+1 if share >= " + fmt(t.leverage_verified) + "; -1 if share <= " +
                              fmt(t.leverage_contradicted),
                          t);
    set(v, p >= t.leverage_verified, p <= t.leverage_contradicted);
    s.facts.push_back(std::move(v));
  }
  // Aggregational Gaussianity: median KS p-value across horizons.
  {
    std::vector<double> medians;
    std::size_t support = 0;
    FactVerdict v;
    for (int h : cfg.horizons) {
      const auto vals = detail::collect(reports, [&](const StockFactReport& r) -> std::optional<double> {
        const auto* nh = r.normality_at(h, cfg.overlapping);
        if (!nh || !nh->ks) return std::nullopt;
        return nh->ks->p_value;
      });
      support = support == 0 ? vals.size() : std::min(support, vals.size());
      medians.push_back(vals.empty() ? std::nan("") : median(vals));
    }
    // Number of leading horizon steps over which the median rises.
    std::size_t rising = 0;
    while (rising + 1 < medians.size() && medians[rising + 1] > medians[rising]) ++rising;
    const std::size_t steps = medians.empty() ? 0 : medians.size() - 1;
    v = make_verdict(Fact::AggregationalGaussianity, "rising_steps", static_cast<double>(rising), support,
                     "+1 if median KS p-value rises at every horizon step; 0 if it rises through the third horizon "
                     "only; -1 otherwise",
                     t);
    for (std::size_t i = 0; i < medians.size(); ++i) {
      v.aggregates["median_ks_p_h" + std::to_string(cfg.horizons[i])] = medians[i];
    }
    bool any_nan = std::any_of(medians.begin(), medians.end(), [](double m) { return !std::isfinite(m); });
    if (any_nan && !v.reason) v.reason = "a horizon has no evaluable KS p-values";
    if (!v.reason) v.verdict = rising == steps ? 1 : (rising >= 2 ? 0 : -1);
    s.facts.push_back(std::move(v));
  }
  // Heavy tails: share of alpha in [lo, hi].
  {
    const auto [p, support] = share(
        reports, [](const StockFactReport& r) { return opt(r.tail); },
        [&](const TailIndexResult& x) { return x.alpha >= t.heavy_tail_alpha_lo && x.alpha <= t.heavy_tail_alpha_hi; });
    auto v = make_verdict(Fact::HeavyTails, "share_alpha_in_range", p, support,
                          "+1 if share(alpha in [" + fmt(t.heavy_tail_alpha_lo) + ", " + fmt(t.heavy_tail_alpha_hi) +
                              "]) >= " + fmt(t.heavy_tail_share),
                          t);
    const auto heavy = share(reports, [](const StockFactReport& r) { return opt(r.tail); },
                             [](const TailIndexResult& x) { return x.heavy_tailed; });
    v.aggregates["share_heavy_tailed"] = heavy.first;
    const auto alphas = detail::collect(reports, [](const StockFactReport& r) -> std::optional<double> {
      if (!r.tail || !r.tail->alpha_finite()) return std::nullopt;
      return r.tail->alpha;
    });
    if (!alphas.empty()) v.aggregates["median_alpha"] = median(alphas);
    set(v, p >= t.heavy_tail_share, false);
    s.facts.push_back(std::move(v));
  }
  // Volume power law: share of finite volume tail exponents.
  {
    const auto [p, support] = share(reports, [](const StockFactReport& r) { return opt(r.volume_tail); },
                                    [](const TailIndexResult& x) { return x.alpha_finite(); });
    auto v = make_verdict(Fact::VolumePowerLaw, "share_volume_alpha_finite", p, support,
                          "+1 if share >= " + fmt(t.volume_power_law_share), t);
    set(v, p >= t.volume_power_law_share, false);
    s.facts.push_back(std::move(v));
  }
  // Volume-volatility: corr(volume, r^2).
  {
    auto get = [](const StockFactReport& r) { return opt(r.volume_volatility_corr); };
    const auto [pos, support] = share(reports, get, [](double x) { return x > 0.0; });
    const auto [neg, support2] = share(reports, get, [](double x) { return x < 0.0; });
    (void)support2;
    auto v = make_verdict(Fact::VolumeVolatilityCorrelation, "share_positive_corr_volume_r2", pos, support,
                          "+1 if share(corr>0) >= " + fmt(t.volume_volatility_verified) + "; -1 if share(corr<0) >= " +
                              fmt(t.volume_volatility_contradicted),
                          t);
    v.aggregates["share_negative_corr_volume_r2"] = neg;
    const auto raw = share(reports, [](const StockFactReport& r) { return opt(r.volume_return_corr); },
                           [](double x) { return x > 0.0; });
    v.aggregates["share_positive_corr_volume_r"] = raw.first;
    set(v, pos >= t.volume_volatility_verified, neg >= t.volume_volatility_contradicted);
    s.facts.push_back(std::move(v));
  }
  // Risk-return: market-level correlation of mean and sd.
  {
    s.risk_return_corr = risk_return_correlation(reports);
    std::size_t support = 0;
    for (const auto& r : reports) support += (!r.skipped && r.mean_return && r.sd_return) ? 1 : 0;
    auto v = make_verdict(Fact::RiskReturnTradeoff, "corr_mean_sd",
                          s.risk_return_corr ? *s.risk_return_corr : std::nan(""), support,
                          "+1 if corr > " + fmt(t.risk_return_band) + "; -1 if corr < -" + fmt(t.risk_return_band), t);
    if (!s.risk_return_corr) v.reason = s.risk_return_corr.reason();
    if (!v.reason) {
      set(v, *s.risk_return_corr > t.risk_return_band, *s.risk_return_corr < -t.risk_return_band);
    } else {
      v.verdict = 0;
    }
    s.facts.push_back(std::move(v));
  }
  // Time-scale asymmetry: any significant positive difference, first window.
  {
    const std::size_t primary = cfg.asymmetry_windows.empty() ? 5 : cfg.asymmetry_windows.front();
    auto any_sig = [](std::size_t w) {
      return [w](const StockFactReport& r) -> std::optional<bool> {
        const auto it = r.asymmetry.find(w);
        if (it == r.asymmetry.end() || !it->second) return std::nullopt;
        return it->second->any_significant;
      };
    };
    const auto [p, support] = share(reports, any_sig(primary), [](bool b) { return b; });
    auto v = make_verdict(Fact::TimeScaleAsymmetry, "share_any_significant_w" + std::to_string(primary), p, support,
                          "+1 if share >= " + fmt(t.time_scale_share), t);
    for (std::size_t w : cfg.asymmetry_windows) {
      v.aggregates["share_any_significant_w" + std::to_string(w)] =
          share(reports, any_sig(w), [](bool b) { return b; }).first;
    }
    set(v, p >= t.time_scale_share, false);
    s.facts.push_back(std::move(v));
  }
  // Long memory in returns.
  {
    auto get = [](const StockFactReport& r) -> std::optional<double> {
      if (!r.hurst) return std::nullopt;
      return r.hurst->H;
    };
    const auto [p, support] =
        share(reports, get, [&](double h) { return h >= t.long_memory_h_lo && h <= t.long_memory_h_hi; });
    auto v = make_verdict(Fact::LongMemory, "share_h_in_range", p, support,
                          "+1 if share(H in [" + fmt(t.long_memory_h_lo) + ", " + fmt(t.long_memory_h_hi) + "]) >= " +
                              fmt(t.long_memory_share) + "; -1 otherwise",
                          t);
    v.aggregates["share_h_above_half"] = share(reports, get, [](double h) { return h > 0.5; }).first;
    const auto hs = detail::collect(reports, get);
    if (!hs.empty()) v.aggregates["median_h"] = median(hs);
    set(v, p >= t.long_memory_share, p < t.long_memory_share);
    s.facts.push_back(std::move(v));
  }
  // Long memory in volume.
  {
    auto get = [](const StockFactReport& r) -> std::optional<double> {
      if (!r.volume_hurst) return std::nullopt;
      return r.volume_hurst->H;
    };
    const auto [p, support] = share(reports, get, [](double h) { return h > 0.5; });
    auto v = make_verdict(Fact::VolumeLongMemory, "share_volume_h_above_half", p, support,
                          "+1 if share >= " + fmt(t.volume_long_memory_share), t);
    set(v, p >= t.volume_long_memory_share, false);
    s.facts.push_back(std::move(v));
  }
  // Slow ACF decay of |r|.
  {
    auto get = [](const StockFactReport& r) -> std::optional<double> {
      if (!r.acf_decay) return std::nullopt;
      return r.acf_decay->beta;
    };
    const auto [p, support] =
        share(reports, get, [&](double b) { return b >= t.acf_decay_beta_lo && b <= t.acf_decay_beta_hi; });
    auto v = make_verdict(Fact::SlowAcfDecay, "share_beta_in_range", p, support,
                          "+1 if share(beta in [" + fmt(t.acf_decay_beta_lo) + ", " + fmt(t.acf_decay_beta_hi) +
                              "]) >= " + fmt(t.acf_decay_share),
                          t);
    const auto betas = detail::collect(reports, get);
    if (!betas.empty()) v.aggregates["median_beta"] = median(betas);
    set(v, p >= t.acf_decay_share, false);
    s.facts.push_back(std::move(v));
  }
  // Absence of autocorrelation: Ljung-Box on returns not rejected.
  {
    const auto [p, support] = share(reports, [](const StockFactReport& r) { return opt(r.absence_lb); },
                                    [&](const PortmanteauResult& q) { return q.p_value >= alpha; });
    auto v = make_verdict(Fact::AbsenceOfAutocorrelation, "share_lb_not_rejected", p, support,
                          "+1 if share >= " + fmt(t.absence_verified) + "; -1 if share < " +
                              fmt(t.absence_contradicted),
                          t);
    v.aggregates["share_bp_not_rejected"] =
        share(reports, [](const StockFactReport& r) { return opt(r.absence_bp); },
              [&](const PortmanteauResult& q) { return q.p_value >= alpha; })
            .first;
    set(v, p >= t.absence_verified, p < t.absence_contradicted);
    s.facts.push_back(std::move(v));
  }
  // Volatility clustering: Ljung-Box on r^2 rejected.
  {
    const auto [p, support] = share(reports, [](const StockFactReport& r) { return opt(r.clustering_lb); },
                                    [&](const PortmanteauResult& q) { return q.p_value < alpha; });
    auto v = make_verdict(Fact::VolatilityClustering, "share_lb_r2_rejected", p, support,
                          "+1 if share >= " + fmt(t.clustering_share), t);
    v.aggregates["share_bp_r2_rejected"] =
        share(reports, [](const StockFactReport& r) { return opt(r.clustering_bp); },
              [&](const PortmanteauResult& q) { return q.p_value < alpha; })
            .first;
    for (std::size_t lag = 1; lag <= cfg.single_lag_max; ++lag) {
      auto get = [lag](const StockFactReport& r) -> std::optional<SingleLagTests> {
        if (r.clustering_single.size() < lag || !r.clustering_single[lag - 1]) return std::nullopt;
        return *r.clustering_single[lag - 1];
      };
      v.aggregates["share_lag" + std::to_string(lag) + "_t_rejected"] =
          share(reports, get, [&](const SingleLagTests& x) { return x.student.p_value < alpha; }).first;
      v.aggregates["share_lag" + std::to_string(lag) + "_normal_rejected"] =
          share(reports, get, [&](const SingleLagTests& x) { return x.normal.p_value < alpha; }).first;
    }
    set(v, p >= t.clustering_share, false);
    s.facts.push_back(std::move(v));
  }
  // Conditional heavy tails: residual tail lighter than the return tail.
  {
    auto get = [](const StockFactReport& r) { return opt(r.conditional_tail); };
    const auto [p, support] = share(reports, get, [](const ConditionalTailComparison& c) { return c.xi_decreased; });
    auto v = make_verdict(Fact::ConditionalHeavyTails, "share_xi_decreased", p, support,
                          "+1 if share >= " + fmt(t.conditional_verified) + "; -1 if share <= " +
                              fmt(t.conditional_contradicted),
                          t);
    v.aggregates["share_alpha_decreased"] =
        share(reports, get, [](const ConditionalTailComparison& c) { return c.decreased; }).first;
    v.aggregates["share_residuals_heavy"] =
        share(reports, get, [](const ConditionalTailComparison& c) { return c.residuals_tail.heavy_tailed; }).first;
    set(v, p >= t.conditional_verified, p <= t.conditional_contradicted);
    s.facts.push_back(std::move(v));
  }
  // Intermittency: kurtosis test rejected for returns and for residuals.
  {
    auto rejected = [&](const KurtosisTestResult& k) { return k.p_value < alpha; };
    const auto [pr, support] =
        share(reports, [](const StockFactReport& r) { return opt(r.kurtosis_returns); }, rejected);
    const auto [pe, support_e] =
        share(reports, [](const StockFactReport& r) { return opt(r.kurtosis_residuals); }, rejected);
    const double joint = std::isfinite(pe) ? std::min(pr, pe) : pe;
    auto v = make_verdict(Fact::Intermittency, "min_share_rejected", joint, std::min(support, support_e),
                          "+1 if share rejected >= " + fmt(t.intermittency_share) + " for returns and residuals", t);
    v.aggregates["share_rejected_returns"] = pr;
    v.aggregates["share_rejected_residuals"] = pe;
    set(v, pr >= t.intermittency_share && pe >= t.intermittency_share, false);
    s.facts.push_back(std::move(v));
  }
  // Taylor effect: market median of d*.
  {
    const auto ds = detail::collect(reports, [](const StockFactReport& r) -> std::optional<double> {
      if (!r.taylor) return std::nullopt;
      return r.taylor->d_star;
    });
    const double med = ds.empty() ? std::nan("") : median(ds);
    auto v = make_verdict(Fact::TaylorEffect, "median_d_star", med, ds.size(),
                          "+1 if median d* in [" + fmt(t.taylor_d_lo) + ", " + fmt(t.taylor_d_hi) + "]", t);
    v.aggregates["share_abs_exceeds_sq"] =
        share(reports, [](const StockFactReport& r) { return opt(r.taylor); },
              [](const TaylorResult& x) { return x.abs_exceeds_sq; })
            .first;
    set(v, med >= t.taylor_d_lo && med <= t.taylor_d_hi, false);
    s.facts.push_back(std::move(v));
  }
  return s;
}

}  // namespace stylized
