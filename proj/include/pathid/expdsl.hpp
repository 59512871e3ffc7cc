#pragma once

// Parser for the .exp experiment description language. One statement per
// line, '#' starts a comment, statement order is pipeline order:
//
//   source <name> signal=<path>:<H|V> idler=<path>:<H|V> eps=<float> phase=<float_rad>
//   rotator path=<int>
//   phase mode=<path>:<H|V> value=<float_rad>
//   order <int>
//   gamma <float>
//   detect <path>=<one|one:H|one:V|bucket:H|bucket:V|any> ...
//
// `detect` lists one clause per monitored path; unlisted paths default to
// `any`. A bare `one` marks a retained analysis path (exactly two required).
// `phase=` on a source is optional and defaults to 0.

#include <cassert>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathid/detection.hpp"
#include "pathid/elements.hpp"
#include "pathid/errors.hpp"

namespace pathid {

struct ExperimentSpec {
  std::vector<Element> elements;
  int max_order = 2;
  DetectionPattern detection;
  double dephasing_gamma = 1.0;
};

namespace dsl_detail {

struct Token {
  std::string text;
  int line;
  int column;
};

inline std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);  // CRLF
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start)
        toks.push_back({std::string(line.substr(start, i - start)), line_no, int(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++line_no;
  }
  return lines;
}

inline int parse_int(const Token& t, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
    throw ParseError(t.line, t.column, "expected integer " + std::string(what) + ", got '" +
                                           t.text + "'");
  return v;
}

inline double parse_double(const Token& t, std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(t.line, t.column, "expected number " + std::string(what) + ", got '" +
                                           std::string(text) + "'");
  return v;
}

inline ModeLabel parse_mode(const Token& t, std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 2 != text.size() ||
      (text[colon + 1] != 'H' && text[colon + 1] != 'V'))
    throw ParseError(t.line, t.column,
                     "expected <path>:<H|V>, got '" + std::string(text) + "'");
  Token path_tok{std::string(text.substr(0, colon)), t.line, t.column};
  int path = parse_int(path_tok, "path");
  if (path < 1) throw ParseError(t.line, t.column, "path index must be >= 1");
  return {path, text[colon + 1] == 'H' ? Pol::H : Pol::V};
}

// key=value pairs after the keyword; each key may appear once.
inline std::map<std::string, Token> keyed_args(const std::vector<Token>& toks,
                                               std::size_t first) {
  std::map<std::string, Token> args;
  for (std::size_t i = first; i < toks.size(); ++i) {
    const Token& t = toks[i];
    auto eq = t.text.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(t.line, t.column, "expected key=value, got '" + t.text + "'");
    std::string key = t.text.substr(0, eq);
    Token val{t.text.substr(eq + 1), t.line, t.column + int(eq) + 1};
    if (!args.emplace(key, val).second)
      throw ParseError(t.line, t.column, "duplicate argument '" + key + "'");
  }
  return args;
}

inline Token take(std::map<std::string, Token>& args, const std::string& key,
                  const Token& stmt) {
  auto it = args.find(key);
  if (it == args.end())
    throw ParseError(stmt.line, stmt.column, "missing argument '" + key + "='");
  Token t = it->second;
  args.erase(it);
  return t;
}

inline void expect_empty(const std::map<std::string, Token>& args) {
  if (!args.empty()) {
    const auto& [key, t] = *args.begin();
    throw ParseError(t.line, t.column, "unknown argument '" + key + "'");
  }
}

inline DetectionConstraint parse_constraint(const Token& t, std::string_view text) {
  using Kind = DetectionConstraint::Kind;
  if (text == "one") return {Kind::ExactlyOneAny, Pol::V};
  if (text == "one:H") return {Kind::ExactlyOnePol, Pol::H};
  if (text == "one:V") return {Kind::ExactlyOnePol, Pol::V};
  if (text == "bucket:H") return {Kind::BucketAtLeastOne, Pol::H};
  if (text == "bucket:V") return {Kind::BucketAtLeastOne, Pol::V};
  if (text == "any") return {Kind::Unconstrained, Pol::V};
  throw ParseError(t.line, t.column,
                   "unknown detector constraint '" + std::string(text) + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace dsl_detail

inline ExperimentSpec parse(std::string_view text) {
  using namespace dsl_detail;
  ExperimentSpec spec;
  bool saw_order = false, saw_gamma = false, saw_detect = false;
  std::set<std::string> source_names;
  std::set<int> referenced_paths;

  for (const auto& toks : tokenize(text)) {
    const Token& kw = toks.front();
    if (kw.text == "source") {
      if (toks.size() < 2)
        throw ParseError(kw.line, kw.column, "source needs a name");
      const Token& name = toks[1];
      if (name.text.find('=') != std::string::npos)
        throw ParseError(name.line, name.column, "source needs a name before its arguments");
      auto args = keyed_args(toks, 2);
      SourceSpec src;
      src.name = name.text;
      Token sig = take(args, "signal", kw);
      Token idl = take(args, "idler", kw);
      Token eps = take(args, "eps", kw);
      src.pump_phase = 0.0;
      if (auto it = args.find("phase"); it != args.end()) {
        src.pump_phase = parse_double(it->second, it->second.text, "phase");
        args.erase(it);
      }
      expect_empty(args);
      src.signal = parse_mode(sig, sig.text);
      src.idler = parse_mode(idl, idl.text);
      src.eps_mag = parse_double(eps, eps.text, "eps");
      if (!source_names.insert(src.name).second)
        throw ValidationError("duplicate source name '" + src.name + "'");
      if (src.signal == src.idler)
        throw ValidationError("source '" + src.name + "': signal and idler must differ");
      if (std::abs(src.eps_mag) >= 0.5)
        throw ValidationError("source '" + src.name + "': |eps| must be < 0.5, got " +
                              format_double(std::abs(src.eps_mag)));
      referenced_paths.insert(src.signal.path);
      referenced_paths.insert(src.idler.path);
      spec.elements.emplace_back(std::move(src));
    } else if (kw.text == "rotator") {
      auto args = keyed_args(toks, 1);
      Token path = take(args, "path", kw);
      expect_empty(args);
      RotatorSpec rot{parse_int(path, "path")};
      if (rot.path < 1) throw ParseError(path.line, path.column, "path index must be >= 1");
      referenced_paths.insert(rot.path);
      spec.elements.emplace_back(rot);
    } else if (kw.text == "phase") {
      auto args = keyed_args(toks, 1);
      Token mode = take(args, "mode", kw);
      Token value = take(args, "value", kw);
      expect_empty(args);
      PhaseSpec ph{parse_mode(mode, mode.text), parse_double(value, value.text, "value")};
      referenced_paths.insert(ph.mode.path);
      spec.elements.emplace_back(ph);
    } else if (kw.text == "order") {
      if (toks.size() != 2) throw ParseError(kw.line, kw.column, "usage: order <int>");
      if (saw_order) throw ValidationError("duplicate 'order' statement");
      saw_order = true;
      spec.max_order = parse_int(toks[1], "order");
      if (spec.max_order < 0) throw ValidationError("order must be >= 0");
    } else if (kw.text == "gamma") {
      if (toks.size() != 2) throw ParseError(kw.line, kw.column, "usage: gamma <float>");
      if (saw_gamma) throw ValidationError("duplicate 'gamma' statement");
      saw_gamma = true;
      spec.dephasing_gamma = parse_double(toks[1], toks[1].text, "gamma");
      if (spec.dephasing_gamma < 0.0 || spec.dephasing_gamma > 1.0)
        throw ValidationError("gamma must be in [0, 1]");
    } else if (kw.text == "detect") {
      if (saw_detect) throw ValidationError("duplicate 'detect' statement");
      saw_detect = true;
      if (toks.size() < 2) throw ParseError(kw.line, kw.column, "detect needs at least one clause");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const Token& t = toks[i];
        auto eq = t.text.find('=');
        if (eq == std::string::npos)
          throw ParseError(t.line, t.column, "expected <path>=<constraint>");
        Token path_tok{t.text.substr(0, eq), t.line, t.column};
        int path = parse_int(path_tok, "path");
        if (path < 1) throw ParseError(t.line, t.column, "path index must be >= 1");
        auto constraint = parse_constraint(t, std::string_view(t.text).substr(eq + 1));
        if (!spec.detection.constraints.emplace(path, constraint).second)
          throw ValidationError("duplicate detect clause for path " + std::to_string(path));
      }
    } else {
      throw ParseError(kw.line, kw.column, "unknown keyword '" + kw.text + "'");
    }
  }

  if (source_names.empty()) throw ParseError(1, 1, "no sources");
  if (!saw_detect) throw ValidationError("missing 'detect' statement");
  spec.detection.require_two_retained();
  for (const auto& [path, c] : spec.detection.constraints)
    if (!referenced_paths.contains(path))
      throw ValidationError("detection references unused path " + std::to_string(path));
  // Each accepted event needs ceil(n_detected/2) pairs.
  const int min_pairs = (spec.detection.min_detected_photons() + 1) / 2;
  if (spec.max_order < min_pairs)
    throw ValidationError("order " + std::to_string(spec.max_order) +
                          " too small for detection pattern (needs >= " +
                          std::to_string(min_pairs) + ")");
  return spec;
}

// Non-fatal diagnostics. Empty means clean.
inline std::vector<std::string> validate(const ExperimentSpec& spec) {
  std::vector<std::string> warnings;
  std::set<int> fed_paths;
  for (const auto& el : spec.elements) {
    if (const auto* src = std::get_if<SourceSpec>(&el)) {
      fed_paths.insert(src->signal.path);
      fed_paths.insert(src->idler.path);
      if (std::abs(src->eps_mag) >= 0.3)
        warnings.push_back("source '" + src->name + "': perturbative accuracy degraded (|eps| = " +
                           dsl_detail::format_double(std::abs(src->eps_mag)) + ")");
    }
  }
  for (const auto& [path, c] : spec.detection.constraints) {
    if (c.kind == DetectionConstraint::Kind::Unconstrained) continue;
    if (!fed_paths.contains(path))
      warnings.push_back("path " + std::to_string(path) +
                         " is detected but no source emits into it");
  }
  return warnings;
}

// Canonical text form; parse(unparse(s)) is structurally equal to s.
inline std::string unparse(const ExperimentSpec& spec) {
  using dsl_detail::format_double;
  std::string out;
  for (const auto& el : spec.elements) {
    if (const auto* src = std::get_if<SourceSpec>(&el)) {
      out += "source " + src->name + " signal=" + to_string(src->signal) +
             " idler=" + to_string(src->idler) + " eps=" + format_double(src->eps_mag) +
             " phase=" + format_double(src->pump_phase) + "\n";
    } else if (const auto* rot = std::get_if<RotatorSpec>(&el)) {
      out += "rotator path=" + std::to_string(rot->path) + "\n";
    } else {
      const auto& ph = std::get<PhaseSpec>(el);
      out += "phase mode=" + to_string(ph.mode) + " value=" + format_double(ph.phi) + "\n";
    }
  }
  out += "order " + std::to_string(spec.max_order) + "\n";
  out += "gamma " + format_double(spec.dephasing_gamma) + "\n";
  out += "detect";
  for (const auto& [path, c] : spec.detection.constraints)
    out += " " + std::to_string(path) + "=" + to_string(c);
  out += "\n";
  return out;
}

}  // namespace pathid
