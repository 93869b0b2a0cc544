#pragma once

// JSON encoding of traces, columns, diagnostics and generic-point reports,
// and the CSV series for plotting. Integers are written as decimal strings
// and rationals as {"num", "den"}, so decoding is exact.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iet/construction.hpp"
#include "iet/errors.hpp"
#include "iet/generic_point.hpp"
#include "iet/projective.hpp"

namespace iet::io {

using json = nlohmann::ordered_json;

inline json to_json(const BigInt& v) { return v.get_str(); }

inline json to_json(const Rational& q) { return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

inline json to_json(const CountVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const RationalInterval& j) { return json{{"lo", to_json(j.lo)}, {"hi", to_json(j.hi)}}; }

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string text(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline bool flag(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) throw ParseError(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

inline Letter letter(const json& j) {
  const auto s = text(j, "letter");
  if (s.size() != 1) throw ParseError("letter must be one character");
  try {
    return Letter::from_symbol(s[0]);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

inline BigInt bigint_from_json(const json& j) { return parse_bigint(detail::text(j, "integer")); }

inline Rational rational_from_json(const json& j) {
  const BigInt num = bigint_from_json(detail::field(j, "num"));
  const BigInt den = bigint_from_json(detail::field(j, "den"));
  if (den <= 0) throw ParseError("rational denominator must be positive");
  Rational q(num, den);
  q.canonicalize();
  if (q.get_den() != den) throw ParseError("rational is not in lowest terms");
  return q;
}

inline CountVector counts_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of integers");
  CountVector v;
  for (const auto& x : j) v.push_back(bigint_from_json(x));
  return v;
}

inline std::vector<Rational> rationals_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

// ---- schedule and trace ----------------------------------------------------

inline json to_json(const Schedule& s) {
  json j;
  if (s.base()) {
    j["base"] = std::to_string(*s.base());
  } else {
    j["values"] = to_json(s.values());
  }
  return j;
}

inline Schedule schedule_from_json(const json& j) {
  try {
    if (j.contains("base")) {
      const BigInt b = bigint_from_json(j.at("base"));
      if (b < 2 || !b.fits_ulong_p()) throw ParseError("schedule base out of range");
      return Schedule::power(b.get_ui());
    }
    return Schedule::explicit_values(counts_from_json(detail::field(j, "values")));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad schedule: ") + e.what());
  }
}

/// Parse "4^k", "b^k" or a comma-separated list a_1,a_2,...
inline Schedule parse_schedule(const std::string& text) {
  try {
    const auto caret = text.find("^k");
    if (caret != std::string::npos && caret + 2 == text.size()) {
      const BigInt b = parse_bigint(text.substr(0, caret));
      if (b < 2 || !b.fits_ulong_p()) throw InvalidArgument("schedule base must be an integer >= 2");
      return Schedule::power(b.get_ui());
    }
    std::vector<BigInt> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_bigint(item));
    return Schedule::explicit_values(std::move(values));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad schedule '") + text + "': " + e.what());
  }
}

inline json to_json(const BlockWord& w) {
  json a = json::array();
  for (const auto& b : w.blocks()) {
    std::string p;
    for (auto l : b.pattern) p += l.symbol();
    a.push_back(json{{"pattern", p}, {"repeat", to_json(b.repeat)}});
  }
  return a;
}

inline BlockWord word_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("word must be an array of blocks");
  std::vector<WordBlock> blocks;
  for (const auto& b : j) {
    WordBlock wb;
    const auto p = detail::text(detail::field(b, "pattern"), "pattern");
    if (p.empty()) throw ParseError("empty word block");
    for (char c : p) wb.pattern.push_back(detail::letter(std::string(1, c)));
    wb.repeat = bigint_from_json(detail::field(b, "repeat"));
    if (wb.repeat < 1) throw ParseError("block repeat must be positive");
    blocks.push_back(std::move(wb));
  }
  return BlockWord(std::move(blocks));
}

inline json to_json(const StepRun& r) {
  return json{{"winner", std::string(1, r.record.winner.symbol())},
              {"loser", std::string(1, r.record.loser.symbol())},
              {"side", to_string(r.record.side)},
              {"count", to_json(r.count)}};
}

inline StepRun run_from_json(const json& j) {
  StepRun r;
  r.record.winner = detail::letter(detail::field(j, "winner"));
  r.record.loser = detail::letter(detail::field(j, "loser"));
  const auto side = detail::text(detail::field(j, "side"), "side");
  if (side == "top")
    r.record.side = Side::top_wins;
  else if (side == "bottom")
    r.record.side = Side::bottom_wins;
  else
    throw ParseError("side must be 'top' or 'bottom'");
  r.count = bigint_from_json(detail::field(j, "count"));
  if (r.count < 1) throw ParseError("run count must be positive");
  return r;
}

inline json to_json(const StoppingWitness& w) {
  return json{{"threshold", to_json(w.threshold)}, {"base", to_json(w.base)},     {"increment", to_json(w.increment)},
              {"count", to_json(w.count)},         {"holds", w.holds},            {"minimal", w.minimal}};
}

inline StoppingWitness witness_from_json(const json& j) {
  StoppingWitness w;
  w.threshold = bigint_from_json(detail::field(j, "threshold"));
  w.base = bigint_from_json(detail::field(j, "base"));
  w.increment = bigint_from_json(detail::field(j, "increment"));
  w.count = bigint_from_json(detail::field(j, "count"));
  w.holds = detail::flag(j, "holds");
  w.minimal = detail::flag(j, "minimal");
  return w;
}

inline json to_json(const ConditionAudit& a) {
  return json{{"exempt", a.exempt},
              {"a_holds", a.a_holds},
              {"a_margin", to_json(a.a_margin)},
              {"b_holds", a.b_holds},
              {"b_margin", to_json(a.b_margin)},
              {"growth_holds", a.growth_holds},
              {"growth_margin", to_json(a.growth_margin)}};
}

inline ConditionAudit audit_from_json(const json& j) {
  ConditionAudit a;
  a.exempt = detail::flag(j, "exempt");
  a.a_holds = detail::flag(j, "a_holds");
  a.a_margin = bigint_from_json(detail::field(j, "a_margin"));
  a.b_holds = detail::flag(j, "b_holds");
  a.b_margin = rational_from_json(detail::field(j, "b_margin"));
  a.growth_holds = detail::flag(j, "growth_holds");
  a.growth_margin = bigint_from_json(detail::field(j, "growth_margin"));
  return a;
}

inline json columns_json(const VisitMatrix& m) {
  json j;
  for (std::uint8_t i = 0; i < m.size(); ++i) j[std::string(1, Letter(i).symbol())] = to_json(m.column(Letter(i)));
  return j;
}

inline VisitMatrix columns_from_json(const json& j) {
  std::vector<CountVector> cols;
  for (std::uint8_t i = 0; i < kAlphabetSize; ++i)
    cols.push_back(counts_from_json(detail::field(j, std::string(1, Letter(i).symbol()).c_str())));
  try {
    return VisitMatrix::from_columns(std::move(cols));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline json to_json(const RoundSnapshots& s) {
  return json{{"lead_start", to_json(s.lead_start)}, {"partner_start", to_json(s.partner_start)},
              {"c_first", to_json(s.c_first)},       {"d_first", to_json(s.d_first)},
              {"c_second", to_json(s.c_second)},     {"d_second", to_json(s.d_second)},
              {"lead_end", to_json(s.lead_end)},     {"partner_end", to_json(s.partner_end)}};
}

inline RoundSnapshots snapshots_from_json(const json& j) {
  RoundSnapshots s;
  s.lead_start = counts_from_json(detail::field(j, "lead_start"));
  s.partner_start = counts_from_json(detail::field(j, "partner_start"));
  s.c_first = counts_from_json(detail::field(j, "c_first"));
  s.d_first = counts_from_json(detail::field(j, "d_first"));
  s.c_second = counts_from_json(detail::field(j, "c_second"));
  s.d_second = counts_from_json(detail::field(j, "d_second"));
  s.lead_end = counts_from_json(detail::field(j, "lead_end"));
  s.partner_end = counts_from_json(detail::field(j, "partner_end"));
  return s;
}

inline json to_json(const RoundSummary& r) {
  json words;
  for (std::uint8_t i = 0; i < r.words.size(); ++i) words[std::string(1, Letter(i).symbol())] = to_json(r.words[i]);
  json log = json::array();
  for (const auto& run : r.log) log.push_back(to_json(run));
  return json{{"k", r.index},
              {"side", to_string(r.side)},
              {"r", to_json(r.r)},
              {"s", to_json(r.s)},
              {"start", to_json(r.start)},
              {"n", to_json(r.n)},
              {"checkpoint", columns_json(r.checkpoint)},
              {"snapshots", to_json(r.snapshots)},
              {"r_rule", to_json(r.r_rule)},
              {"s_rule", to_json(r.s_rule)},
              {"audit", to_json(r.audit)},
              {"words", words},
              {"log", log}};
}

inline RoundSummary round_from_json(const json& j) {
  RoundSummary r;
  const auto& k = detail::field(j, "k");
  if (!k.is_number_unsigned()) throw ParseError("round index must be a non-negative integer");
  r.index = k.get<std::size_t>();
  const auto side = detail::text(detail::field(j, "side"), "side");
  if (side == "right")
    r.side = LoopSide::right;
  else if (side == "left")
    r.side = LoopSide::left;
  else
    throw ParseError("round side must be 'right' or 'left'");
  r.r = bigint_from_json(detail::field(j, "r"));
  r.s = bigint_from_json(detail::field(j, "s"));
  r.start = bigint_from_json(detail::field(j, "start"));
  r.n = bigint_from_json(detail::field(j, "n"));
  r.checkpoint = columns_from_json(detail::field(j, "checkpoint"));
  r.snapshots = snapshots_from_json(detail::field(j, "snapshots"));
  r.r_rule = witness_from_json(detail::field(j, "r_rule"));
  r.s_rule = witness_from_json(detail::field(j, "s_rule"));
  r.audit = audit_from_json(detail::field(j, "audit"));
  const auto& words = detail::field(j, "words");
  for (std::uint8_t i = 0; i < kAlphabetSize; ++i)
    r.words.push_back(word_from_json(detail::field(words, std::string(1, Letter(i).symbol()).c_str())));
  const auto& log = detail::field(j, "log");
  if (!log.is_array()) throw ParseError("log must be an array");
  for (const auto& run : log) r.log.push_back(run_from_json(run));
  return r;
}

inline json to_json(const ConstructionTrace& t) {
  json rounds = json::array();
  for (const auto& r : t.rounds) rounds.push_back(to_json(r));
  return json{{"format", "iet-trace/1"}, {"schedule", to_json(t.schedule)}, {"rounds", rounds}};
}

inline ConstructionTrace trace_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "iet-trace/1") throw ParseError("not a trace file");
  ConstructionTrace t;
  t.schedule = schedule_from_json(detail::field(j, "schedule"));
  const auto& rounds = detail::field(j, "rounds");
  if (!rounds.is_array()) throw ParseError("rounds must be an array");
  for (const auto& r : rounds) t.rounds.push_back(round_from_json(r));
  return t;
}

inline ConstructionTrace parse_trace(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return trace_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  }
}

inline std::string serialize_trace(const ConstructionTrace& t) { return to_json(t).dump(1); }

// ---- other exports ---------------------------------------------------------

inline json lengths_json(const LengthVector& lengths) {
  json j;
  for (std::uint8_t i = 0; i < lengths.size(); ++i) j[std::string(1, Letter(i).symbol())] = to_json(lengths[i]);
  return j;
}

inline LengthVector lengths_from_json(const json& j) {
  LengthVector out;
  for (std::uint8_t i = 0; i < kAlphabetSize; ++i)
    out.push_back(rational_from_json(detail::field(j, std::string(1, Letter(i).symbol()).c_str())));
  return out;
}

inline json columns_export(const ConstructionTrace& t) {
  json rounds = json::array();
  for (std::size_t k = 0; k <= t.depth(); ++k)
    rounds.push_back(json{{"k", k}, {"n", to_json(t.n(k))}, {"columns", columns_json(t.matrix(k))}});
  return json{{"format", "iet-columns/1"}, {"checkpoints", rounds}};
}

namespace detail {

inline json series(const std::vector<std::optional<double>>& s) {
  json a = json::array();
  for (std::size_t k = 1; k < s.size(); ++k) a.push_back(s[k] ? json(*s[k]) : json(nullptr));
  return a;
}

inline json vec(const std::vector<double>& v, std::size_t from) {
  json a = json::array();
  for (std::size_t k = from; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

}  // namespace detail

inline json diagnostics_json(const AngleSeries& a, const MeasureEstimate& est, const std::vector<ConeProfile>& cones) {
  json cone = json::array();
  for (const auto& c : cones)
    cone.push_back(json{{"k", c.k},
                        {"y_extent", c.y_extent},
                        {"u_min", c.u_min},
                        {"u_max", c.u_max},
                        {"u_c", c.u_c},
                        {"l1_c_to_v_prime", c.l1_c_to_v_prime}});
  return json{{"format", "iet-diagnostics/1"},
              {"rounds", a.rounds},
              {"theta_ef", detail::series(a.theta_ef)},
              {"theta_ab", detail::series(a.theta_ab)},
              {"theta_cross", detail::series(a.theta_cross)},
              {"theta_cd", detail::series(a.theta_cd)},
              {"theta_cd_inner", detail::series(a.theta_cd_inner)},
              {"contraction_c", detail::series(a.contraction_c)},
              {"contraction_d", detail::series(a.contraction_d)},
              {"simplex_contraction_c", detail::series(a.simplex_contraction_c)},
              {"simplex_contraction_d", detail::series(a.simplex_contraction_d)},
              {"discrepancy_c", detail::series(a.discrepancy_c)},
              {"discrepancy_d", detail::series(a.discrepancy_d)},
              {"v0", to_json(est.v0)},
              {"v1", to_json(est.v1)},
              {"v_prime", to_json(est.v_prime)},
              {"v0_error", est.v0_error},
              {"v1_error", est.v1_error},
              {"v_prime_error", est.v_prime_error},
              {"v0_steps", detail::vec(est.v0_steps, 2)},
              {"v1_steps", detail::vec(est.v1_steps, 2)},
              {"v_prime_steps", detail::vec(est.v_prime_steps, 2)},
              {"u_gap_constant", u_gap_constant(cones)},
              {"cones", cone}};
}

inline json generic_json(const NestedChain& chain, const GenericPointReport& rep) {
  json levels = json::array();
  for (const auto& l : chain.levels) {
    std::string seg;
    for (auto x : l.segment) seg += x.symbol();
    json floors = json::array();
    for (const auto& f : l.hat.classification.floors)
      floors.push_back(json{{"tower", std::string(1, f.tower.symbol())}, {"index", f.index}, {"interval", to_json(f.interval)}});
    levels.push_back(json{{"k", l.k},
                          {"interval", to_json(l.interval)},
                          {"j", to_json(l.j)},
                          {"increment", to_json(l.increment)},
                          {"formula_recurrence", to_json(l.formula_recurrence)},
                          {"formula_blocks", to_json(l.formula_blocks)},
                          {"c", l.hat.c},
                          {"hat_floors", floors},
                          {"segment", seg}});
  }
  json cps = json::array();
  for (const auto& c : rep.checkpoints)
    cps.push_back(json{{"k", c.k},
                       {"j", to_json(c.j)},
                       {"counts", to_json(c.counts)},
                       {"frequencies", to_json(c.frequencies)},
                       {"theta_c", c.theta_c},
                       {"theta_d", c.theta_d},
                       {"worst_theta_c", c.worst_theta_c},
                       {"l1_to_v_prime", c.l1_to_v_prime},
                       {"l1_to_v0", c.l1_to_v0},
                       {"l1_to_v1", c.l1_to_v1}});
  return json{{"format", "iet-generic/1"}, {"point", to_json(rep.point)}, {"levels", levels}, {"checkpoints", cps}};
}

inline constexpr const char* kGenericCsvHeader = "k,j_k,fA,fB,fC,fD,fE,fF,l1_to_vprime,theta_C,theta_D";

inline std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string generic_csv(const GenericPointReport& rep) {
  std::string out = std::string(kGenericCsvHeader) + "\n";
  for (const auto& c : rep.checkpoints) {
    out += std::to_string(c.k) + "," + c.j.get_str();
    for (const auto& f : c.frequencies) out += "," + fmt15(f.get_d());
    out += "," + fmt15(c.l1_to_v_prime) + "," + fmt15(c.theta_c) + "," + fmt15(c.theta_d) + "\n";
  }
  return out;
}

}  // namespace iet::io
