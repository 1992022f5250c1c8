#pragma once

// Daily OHLCV ingestion: CSV parsing, cleaning, and multi-horizon log returns.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stylized/error.hpp"

namespace stylized {

using Date = std::chrono::year_month_day;

/// One trading day. Missing fields from the source are stored as NaN and
/// removed by `clean`.
struct PriceRecord {
  Date date;
  double close = std::numeric_limits<double>::quiet_NaN();
  double volume = std::numeric_limits<double>::quiet_NaN();
};

struct PriceSeries {
  std::string ticker;
  std::vector<PriceRecord> records;

  [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
  [[nodiscard]] bool empty() const noexcept { return records.empty(); }
};

struct ReturnSeries {
  std::vector<double> values;
  int horizon = 1;
  bool overlapping = true;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

struct ManifestEntry {
  std::string ticker;
  std::filesystem::path path;
};

struct MarketManifest {
  std::string market;
  std::vector<ManifestEntry> entries;
};

struct CleanResult {
  PriceSeries series;
  std::size_t dropped = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline bool is_null_token(std::string_view s) {
  return s.empty() || s == "null" || s == "NULL" || s == "NaN" || s == "nan" || s == "NA";
}

inline std::optional<Date> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  const auto ok = [](std::string_view part, auto& value) {
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    return ec == std::errc{} && ptr == end;
  };
  if (!ok(s.substr(0, 4), y) || !ok(s.substr(5, 2), m) || !ok(s.substr(8, 2), d)) return std::nullopt;
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

/// NaN for null tokens, nullopt for garbage.
inline std::optional<double> parse_number(std::string_view s) {
  if (is_null_token(s)) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace detail

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

/// Parses a Yahoo-style daily CSV. Uses Close, falling back to Adj Close only
/// when Close is absent. Null rows are kept (as NaN) for `clean` to drop.
inline PriceSeries parse_price_csv(std::istream& in, std::string ticker = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) break;
  }
  if (detail::trim(line).empty()) fail(ErrorKind::Format, "missing header row");

  const auto header = detail::split_fields(line);
  std::map<std::string, std::size_t, std::less<>> columns;
  for (std::size_t i = 0; i < header.size(); ++i) columns.emplace(std::string(header[i]), i);

  const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    if (auto it = columns.find(name); it != columns.end()) return it->second;
    return std::nullopt;
  };
  const auto date_col = column("Date");
  if (!date_col) fail(ErrorKind::Format, "missing required column: Date");
  auto close_col = column("Close");
  if (!close_col) close_col = column("Adj Close");
  if (!close_col) fail(ErrorKind::Format, "missing required column: Close (or Adj Close)");
  const auto volume_col = column("Volume");
  if (!volume_col) fail(ErrorKind::Format, "missing required column: Volume");

  const std::size_t needed = std::max({*date_col, *close_col, *volume_col}) + 1;
  PriceSeries series{std::move(ticker), {}};
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() < needed) {
      throw Error(ErrorKind::Row, "row " + std::to_string(line_no) + ": too few fields", line_no);
    }
    const auto date = detail::parse_iso_date(fields[*date_col]);
    if (!date) {
      throw Error(ErrorKind::Row,
                  "row " + std::to_string(line_no) + ": unparseable date '" + std::string(fields[*date_col]) + "'",
                  line_no);
    }
    const auto close = detail::parse_number(fields[*close_col]);
    const auto volume = detail::parse_number(fields[*volume_col]);
    if (!close || !volume) {
      throw Error(ErrorKind::Row, "row " + std::to_string(line_no) + ": unparseable number", line_no);
    }
    // Yahoo null rows carry "null" in every numeric field; a null anywhere
    // in the row marks the whole row for removal.
    bool any_null = false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i != *date_col && detail::is_null_token(fields[i])) any_null = true;
    }
    PriceRecord rec{*date, *close, *volume};
    if (any_null) rec.close = std::numeric_limits<double>::quiet_NaN();
    series.records.push_back(rec);
  }
  return series;
}

inline PriceSeries load_price_csv(const std::filesystem::path& path, std::string ticker = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Input, "cannot open " + path.string());
  return parse_price_csv(in, std::move(ticker));
}

/// Drops invalid rows, sorts by date and removes duplicate dates keeping the
/// first occurrence in file order.
inline CleanResult clean(const PriceSeries& series) {
  std::vector<PriceRecord> kept;
  kept.reserve(series.records.size());
  for (const auto& r : series.records) {
    if (std::isfinite(r.close) && r.close > 0.0 && std::isfinite(r.volume) && r.volume >= 0.0) {
      kept.push_back(r);
    }
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const PriceRecord& a, const PriceRecord& b) { return a.date < b.date; });
  auto last = std::unique(kept.begin(), kept.end(),
                          [](const PriceRecord& a, const PriceRecord& b) { return a.date == b.date; });
  kept.erase(last, kept.end());

  if (kept.size() < 2) {
    fail(ErrorKind::EmptySeries, "series '" + series.ticker + "' has fewer than 2 valid records after cleaning");
  }
  CleanResult result;
  result.dropped = series.records.size() - kept.size();
  result.series = PriceSeries{series.ticker, std::move(kept)};
  return result;
}

/// Log returns ln(p_t / p_{t-h}). Overlapping mode yields one value per day
/// t >= h; non-overlapping mode strides by h from the first observation.
inline ReturnSeries log_returns(const PriceSeries& series, int horizon = 1, bool overlapping = true) {
  if (horizon < 1) fail(ErrorKind::InvalidArgument, "horizon must be positive");
  const auto n = series.size();
  const auto h = static_cast<std::size_t>(horizon);
  if (n <= h) {
    fail(ErrorKind::InsufficientData, "series of length " + std::to_string(n) +
                                          " is too short for horizon " + std::to_string(horizon));
  }
  ReturnSeries out{{}, horizon, overlapping};
  const auto& rec = series.records;
  if (overlapping) {
    out.values.reserve(n - h);
    for (std::size_t t = h; t < n; ++t) out.values.push_back(std::log(rec[t].close / rec[t - h].close));
  } else {
    const std::size_t count = (n - 1) / h;
    out.values.reserve(count);
    for (std::size_t j = 1; j <= count; ++j) {
      out.values.push_back(std::log(rec[j * h].close / rec[(j - 1) * h].close));
    }
  }
  return out;
}

inline std::vector<double> volume_values(const PriceSeries& series) {
  if (series.empty()) fail(ErrorKind::EmptySeries, "volume_values: empty series");
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& r : series.records) out.push_back(r.volume);
  return out;
}

/// Reads a manifest document:
///   {"markets": [{"name": "...", "stocks": [{"ticker": "...", "path": "..."}]}]}
/// Relative paths are resolved against the manifest's directory.
inline std::vector<MarketManifest> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Input, "cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, "manifest " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  std::vector<MarketManifest> markets;
  std::set<std::string> market_names;
  try {
    for (const auto& m : doc.at("markets")) {
      MarketManifest manifest;
      manifest.market = m.at("name").get<std::string>();
      if (!market_names.insert(manifest.market).second) {
        fail(ErrorKind::Input, "duplicate market name in manifest: " + manifest.market);
      }
      std::set<std::string> tickers;
      for (const auto& s : m.at("stocks")) {
        ManifestEntry e{s.at("ticker").get<std::string>(), s.at("path").get<std::string>()};
        if (!tickers.insert(e.ticker).second) {
          fail(ErrorKind::Input, "duplicate ticker '" + e.ticker + "' in market " + manifest.market);
        }
        if (e.path.is_relative()) e.path = base / e.path;
        manifest.entries.push_back(std::move(e));
      }
      markets.push_back(std::move(manifest));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Input, "manifest " + path.string() + ": " + e.what());
  }
  return markets;
}

}  // namespace stylized
