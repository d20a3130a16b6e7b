#include "semideg/cli/description.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "semideg/errors.hpp"
#include "semideg/parser.hpp"

namespace semideg::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError("not a number: '" + s + "'");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// `g[x,y]` -> {"x", "y"} when the prefix matches.
std::optional<std::pair<std::string, std::string>> matrix_key(std::string_view key, std::string_view prefix) {
  if (key.size() < prefix.size() + 2 || key.substr(0, prefix.size()) != prefix || key[prefix.size()] != '[' ||
      key.back() != ']')
    return std::nullopt;
  auto parts = split(key.substr(prefix.size() + 1, key.size() - prefix.size() - 2), ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) return std::nullopt;
  return std::pair{parts[0], parts[1]};
}

enum class Block { None, Chart, Metric, Potentials, Killing, Analysis };

Tensor build_matrix(const std::vector<MatrixEntry>& entries, const std::string& symbol, Chart& chart_builder,
                    const ChartPtr& chart) {
  Tensor t = Tensor::all_lower(chart, 2);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : entries) {
    auto index = [&](const std::string& name) {
      const auto& coords = chart->coordinates();
      auto it = std::find(coords.begin(), coords.end(), name);
      if (it == coords.end()) fail(e.line, "'" + name + "' is not a coordinate");
      return static_cast<std::size_t>(it - coords.begin());
    };
    std::size_t i = index(e.row), j = index(e.col);
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) fail(e.line, symbol + "[" + e.row + "," + e.col + "] given twice");
    const RationalFunction v = normalize(parse_expr(e.text, chart_builder), chart);
    t.at({i, j}) = v;
    t.at({j, i}) = v;
  }
  return t;
}

}  // namespace

SystemDescription parse_description(std::string_view text, std::string name) {
  SystemDescription d;
  d.name = std::move(name);
  Block block = Block::None;
  std::set<std::string> seen_blocks, seen_keys;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated block header");
      auto words = split(trim(line.substr(1, line.size() - 2)), ' ');
      words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
      if (words.empty()) fail(line_no, "empty block header");
      const std::string& kind = words[0];
      seen_keys.clear();
      if (kind == "killing") {
        if (words.size() != 2 || words[1].rfind("name=", 0) != 0 || !is_identifier(words[1].substr(5)))
          fail(line_no, "expected [killing name=<identifier>]");
        const std::string kname = words[1].substr(5);
        for (const auto& k : d.killing)
          if (k.name == kname) fail(line_no, "duplicate Killing tensor '" + kname + "'");
        d.killing.push_back({kname, {}});
        block = Block::Killing;
        continue;
      }
      if (words.size() != 1) fail(line_no, "block [" + kind + "] takes no attributes");
      if (kind == "chart") block = Block::Chart;
      else if (kind == "metric") block = Block::Metric;
      else if (kind == "potentials") block = Block::Potentials;
      else if (kind == "analysis") block = Block::Analysis;
      else fail(line_no, "unknown block [" + kind + "]");
      if (!seen_blocks.insert(kind).second) fail(line_no, "block [" + kind + "] appears twice");
      if (block == Block::Metric) d.has_metric = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) fail(line_no, "empty key or value");
    auto once = [&] {
      if (!seen_keys.insert(key).second) fail(line_no, "key '" + key + "' given twice");
    };

    switch (block) {
      case Block::None:
        fail(line_no, "entry outside of a block");
      case Block::Chart:
        if (key == "coordinates") {
          once();
          d.coordinates = split(value, ',');
          for (const auto& c : d.coordinates)
            if (!is_identifier(c)) fail(line_no, "bad coordinate name '" + c + "'");
        } else if (key.rfind("sqrt ", 0) == 0 && is_identifier(std::string(trim(key.substr(5))))) {
          d.atoms.push_back({std::string(trim(key.substr(5))), value});
        } else {
          fail(line_no, "unknown key '" + key + "' in [chart]");
        }
        break;
      case Block::Metric: {
        auto idx = matrix_key(key, "g");
        if (!idx) fail(line_no, "unknown key '" + key + "' in [metric]; expected g[a,b]");
        d.metric.push_back({line_no, idx->first, idx->second, value});
        break;
      }
      case Block::Potentials:
        if (key != "V") fail(line_no, "unknown key '" + key + "' in [potentials]; expected V");
        d.potentials.push_back(value);
        break;
      case Block::Killing: {
        auto idx = matrix_key(key, "K");
        if (!idx) fail(line_no, "unknown key '" + key + "' in [killing]; expected K[a,b]");
        d.killing.back().entries.push_back({line_no, idx->first, idx->second, value});
        break;
      }
      case Block::Analysis:
        try {
          if (key == "base") {
            once();
            d.analysis.base = parse_point(value);
          } else if (key == "grid") {
            once();
            d.analysis.grid = parse_grid(value);
          } else if (key == "spacing") {
            once();
            d.analysis.spacing = parse_double(value);
            if (!(*d.analysis.spacing > 0)) fail(line_no, "spacing must be positive");
          } else if (key == "tol") {
            once();
            d.analysis.tolerance = parse_double(value);
            if (!(*d.analysis.tolerance > 0)) fail(line_no, "tol must be positive");
          } else if (key == "fit") {
            d.analysis.dictionary.push_back(value);
          } else {
            fail(line_no, "unknown key '" + key + "' in [analysis]");
          }
        } catch (const InputError& e) {
          const std::string what = e.what();
          if (what.rfind("line ", 0) == 0) throw;
          fail(line_no, what);
        }
        break;
    }
  }
  if (d.coordinates.empty()) throw InputError("missing [chart] coordinates");
  if (d.potentials.empty()) throw InputError("missing [potentials]");
  return d;
}

std::string to_text(const SystemDescription& d) {
  std::ostringstream out;
  auto join = [](const auto& items, const auto& fmt) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + fmt(items[i]);
    return s;
  };
  auto same = [](const std::string& s) { return s; };
  out << "[chart]\ncoordinates = " << join(d.coordinates, same) << "\n";
  for (const auto& a : d.atoms) out << "sqrt " << a.name << " = " << a.radicand << "\n";
  if (d.has_metric) {
    out << "\n[metric]\n";
    for (const auto& e : d.metric) out << "g[" << e.row << "," << e.col << "] = " << e.text << "\n";
  }
  out << "\n[potentials]\n";
  for (const auto& v : d.potentials) out << "V = " << v << "\n";
  for (const auto& k : d.killing) {
    out << "\n[killing name=" << k.name << "]\n";
    for (const auto& e : k.entries) out << "K[" << e.row << "," << e.col << "] = " << e.text << "\n";
  }
  const AnalysisSpec& a = d.analysis;
  if (a.base || a.grid || a.spacing || a.tolerance || !a.dictionary.empty()) {
    out << "\n[analysis]\n";
    if (a.base) out << "base = " << join(*a.base, format_double) << "\n";
    if (a.grid) {
      out << "grid = ";
      for (std::size_t i = 0; i < a.grid->size(); ++i) out << (i ? "x" : "") << (*a.grid)[i];
      out << "\n";
    }
    if (a.spacing) out << "spacing = " << format_double(*a.spacing) << "\n";
    if (a.tolerance) out << "tol = " << format_double(*a.tolerance) << "\n";
    for (const auto& f : a.dictionary) out << "fit = " << f << "\n";
  }
  return out.str();
}

System build_system(const SystemDescription& d) {
  Chart builder(d.coordinates);
  for (const auto& a : d.atoms) {
    if (builder.find(a.name)) throw InputError("name '" + a.name + "' declared twice");
    const ChartPtr coords_only = make_chart(d.coordinates);
    builder.add_atom(a.name, to_polynomial(parse_expr(a.radicand, *coords_only), coords_only));
  }
  // sqrt(...) of a new radicand may declare further atoms while parsing.
  std::vector<Expr> potentials;
  for (const auto& v : d.potentials) potentials.push_back(parse_expr_declaring(v, builder));
  std::vector<Expr> dictionary;
  for (const auto& f : d.analysis.dictionary) dictionary.push_back(parse_expr_declaring(f, builder));
  auto declare = [&](const std::vector<MatrixEntry>& entries) {
    for (const auto& e : entries) parse_expr_declaring(e.text, builder);
  };
  declare(d.metric);
  for (const auto& k : d.killing) declare(k.entries);
  const ChartPtr chart = std::make_shared<const Chart>(builder);

  Metric metric = d.has_metric ? Metric(build_matrix(d.metric, "g", builder, chart)) : Metric::euclidean(chart);
  PotentialFamily family(metric, potentials);
  std::vector<KillingCandidate> killing;
  for (const auto& k : d.killing) killing.emplace_back(build_matrix(k.entries, "K", builder, chart), k.name);

  const std::size_t n = d.coordinates.size();
  if (d.analysis.base && d.analysis.base->size() != n)
    throw InputError("base point needs " + std::to_string(n) + " coordinates");
  if (d.analysis.grid && d.analysis.grid->size() != n)
    throw InputError("grid needs " + std::to_string(n) + " counts");
  return System{d, chart, std::move(metric), std::move(family), std::move(killing), std::move(dictionary)};
}

std::vector<std::string> parse_dictionary(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::vector<double> parse_point(std::string_view text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<std::size_t> parse_grid(std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, 'x')) {
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size() || v == 0)
      throw InputError("bad grid '" + std::string(text) + "'; expected counts like 3x3x3");
    out.push_back(v);
  }
  return out;
}

}  // namespace semideg::cli
