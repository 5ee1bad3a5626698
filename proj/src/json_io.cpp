#include "ppcdstab/json_io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <map>
#include <cstdio>
#include <sstream>

#include "ppcdstab/errors.hpp"
#include "ppcdstab/sampling.hpp"

namespace ppcdstab {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_error(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing \"" + key + "\"");
  return *it;
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_string()) parse_error(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Ray ray_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    parse_error(where + ": expected [dx, dy] with integer entries");
  }
  try {
    return Ray(j[0].get<long>(), j[1].get<long>());
  } catch (const Error& e) {
    parse_error(where + ": " + e.what());
  }
}

Json ray_to_json(const Ray& r) { return Json::array({r.dx(), r.dy()}); }

Facet facet_from_json(const Json& j, const std::string& where) {
  if (j == "lo") return Facet::Lo;
  if (j == "hi") return Facet::Hi;
  parse_error(where + ": facet must be \"lo\" or \"hi\"");
}

FlowVec flow_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_array()) {
      if (j.size() != 2) parse_error(where + ": flow vector needs two entries");
      return FlowVec(rat_from_json(j[0]), rat_from_json(j[1]));
    }
    if (j.is_object()) {
      const Rat a = rat_from_json(field(j, "a", where));
      const Rat b = rat_from_json(field(j, "b", where));
      const std::string orient = j.contains("orient") ? j["orient"].get<std::string>() : "ccw";
      if (orient != "ccw" && orient != "cw") parse_error(where + ": orient must be \"ccw\" or \"cw\"");
      return flow_from_coefficients(a, b, orient == "ccw");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    parse_error(where + ": " + e.what());
  }
  parse_error(where + ": flow must be [x, y] or {\"a\", \"b\", \"orient\"}");
}

std::string seconds_str(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::string verdict_text(const Verdict& v, const StateNamer& name) {
  std::string out(to_string(v.decision));
  auto label = [&](StateId s) {
    const Json j = name(s);
    return j.is_string() ? j.get<std::string>() : j.dump();
  };
  if (const auto* w = std::get_if<InfiniteEdgeWitness>(&v.witness)) {
    out += "  (infinite edge " + label(w->src) + " -> " + label(w->dst) + ")";
  } else if (const auto* w = std::get_if<PositiveCycleWitness>(&v.witness)) {
    out += "  (cycle";
    for (StateId s : w->cycle.states) out += " " + label(s);
    out += ", product " + w->product.str() + ")";
  } else if (const auto* w = std::get_if<EffectiveWeight>(&v.witness)) {
    out += "  (effective weight " + std::string(to_string(w->cmp)) + " 1, log " + std::to_string(w->float_log) + ")";
  }
  return out;
}

}  // namespace

std::string rat_fraction(const Rat& r) { return r.numerator().get_str() + "/" + r.denominator().get_str(); }

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  parse_error("expected a rational \"a/b\", got " + j.dump());
}

Json chain_to_json(const Wdtmc& chain) {
  Json edges = Json::array();
  for (const Edge& e : chain.edges()) {
    Json w = e.weight.is_infinite() ? Json("inf") : Json{{"ratio", rat_fraction(e.weight.ratio())}};
    edges.push_back({{"src", chain.name(e.src)}, {"dst", chain.name(e.dst)}, {"prob", rat_fraction(e.prob)}, {"weight", w}});
  }
  return {{"states", chain.states()}, {"initial", chain.name(chain.initial())}, {"edges", edges}};
}

Wdtmc chain_from_json(const Json& j) {
  const Json& states = field(j, "states", "chain");
  if (!states.is_array() || states.empty()) parse_error("chain: \"states\" must be a non-empty array");
  std::vector<std::string> names;
  std::map<std::string, StateId> index;
  for (const Json& s : states) {
    if (!s.is_string()) parse_error("chain: state names must be strings");
    if (!index.emplace(s.get<std::string>(), names.size()).second) parse_error("chain: duplicate state '" + s.get<std::string>() + "'");
    names.push_back(s.get<std::string>());
  }
  auto lookup = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw Error(ErrorCode::UnknownState, "unknown state '" + n + "'");
    return it->second;
  };
  const StateId initial = lookup(string_field(j, "initial", "chain"));
  const Json& edges_json = field(j, "edges", "chain");
  if (!edges_json.is_array()) parse_error("chain: \"edges\" must be an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const Json& e = edges_json[i];
    const std::string where = "edge " + std::to_string(i);
    Edge edge{lookup(string_field(e, "src", where)), lookup(string_field(e, "dst", where)),
              rat_from_json(field(e, "prob", where)), Scale()};
    const Json& w = field(e, "weight", where);
    if (w == "inf") {
      edge.weight = Scale::infinite();
    } else {
      const Rat r = rat_from_json(field(w, "ratio", where + " weight"));
      if (r.sign() <= 0) parse_error(where + ": weight ratio must be positive");
      edge.weight = Scale::finite(r);
    }
    edges.push_back(std::move(edge));
  }
  return Wdtmc(std::move(names), std::move(edges), initial);
}

Json ppcd_to_json(const Ppcd& model) {
  Json locations = Json::array();
  for (const Location& loc : model.locations) {
    Json sw = Json::object();
    for (const auto& [target, p] : loc.switch_probs) sw[target] = rat_fraction(p);
    Json j{{"id", loc.id},
           {"sector", {{"lo", ray_to_json(loc.lo)}, {"hi", ray_to_json(loc.hi)}}},
           {"flow", Json::array({rat_fraction(loc.flow.r()(0)), rat_fraction(loc.flow.r()(1))})},
           {"guard", loc.guard == loc.lo ? Json("lo") : loc.guard == loc.hi ? Json("hi") : ray_to_json(loc.guard)},
           {"switch", sw}};
    if (!loc.stall.is_zero()) j["stall"] = rat_fraction(loc.stall);
    locations.push_back(std::move(j));
  }
  return {{"locations", locations},
          {"initial", {{"location", model.initial.location}, {"facet", std::string(to_string(model.initial.facet))}}}};
}

Ppcd ppcd_from_json(const Json& j) {
  const Json& locs = field(j, "locations", "model");
  if (!locs.is_array()) parse_error("model: \"locations\" must be an array");
  Ppcd model;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const Json& l = locs[i];
    const std::string id = string_field(l, "id", "location " + std::to_string(i));
    const std::string where = "location '" + id + "'";
    const Json& sector = field(l, "sector", where);
    const Ray lo = ray_from_json(field(sector, "lo", where), where + " sector.lo");
    const Ray hi = ray_from_json(field(sector, "hi", where), where + " sector.hi");
    const Json& g = field(l, "guard", where);
    const Ray guard = g.is_string() ? (facet_from_json(g, where + " guard") == Facet::Lo ? lo : hi)
                                    : ray_from_json(g, where + " guard");
    Location loc{id, lo, hi, flow_from_json(field(l, "flow", where), where + " flow"), guard, {}, Rat(0)};
    const Json& sw = field(l, "switch", where);
    if (!sw.is_object()) parse_error(where + ": \"switch\" must be an object");
    for (const auto& [target, p] : sw.items()) loc.switch_probs.emplace(target, rat_from_json(p));
    if (l.contains("stall")) loc.stall = rat_from_json(l["stall"]);
    model.locations.push_back(std::move(loc));
  }
  const Json& init = field(j, "initial", "model");
  model.initial = {string_field(init, "location", "initial"), facet_from_json(field(init, "facet", "initial"), "initial")};
  return model;
}

InputKind detect_input_kind(const Json& j) {
  if (j.is_object() && j.contains("locations")) return InputKind::Model;
  if (j.is_object() && j.contains("states")) return InputKind::Chain;
  parse_error("input has neither \"locations\" nor \"states\" at top level");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

StateNamer chain_state_namer(const Wdtmc& chain) {
  return [&chain](StateId s) { return Json(chain.name(s)); };
}

StateNamer quotient_state_namer(const Quotient& q) {
  if (q.states.empty()) return chain_state_namer(q.chain);
  return [&q](StateId s) {
    return Json{{"location", q.states[s].location}, {"facet", std::string(to_string(q.states[s].facet))}};
  };
}

Json verdict_to_json(const Verdict& v, const StateNamer& name) {
  Json w;
  if (const auto* iw = std::get_if<InfiniteEdgeWitness>(&v.witness)) {
    w = {{"kind", "InfiniteEdge"}, {"src", name(iw->src)}, {"dst", name(iw->dst)}};
  } else if (const auto* cw = std::get_if<PositiveCycleWitness>(&v.witness)) {
    Json cycle = Json::array();
    for (StateId s : cw->cycle.states) cycle.push_back(name(s));
    w = {{"kind", "PositiveCycle"}, {"cycle", cycle}, {"product", rat_fraction(cw->product)}};
  } else if (const auto* ew = std::get_if<EffectiveWeight>(&v.witness)) {
    w = {{"kind", "EffectiveWeight"},
         {"cmp", std::string(to_string(ew->cmp))},
         {"sign", std::string(to_string(ew->sign()))},
         {"float_log", ew->float_log}};
  } else {
    w = {{"kind", "None"}};
  }
  return {{"decision", std::string(to_string(v.decision))}, {"witness", w}};
}

AnalysisReport analyze_chain(Wdtmc chain) {
  using Clock = std::chrono::steady_clock;
  require_valid(chain);
  auto t0 = Clock::now();
  Verdict absolute = check_absolute(chain);
  auto t1 = Clock::now();
  AnalysisReport report{Quotient{std::move(chain), {}}, std::move(absolute), std::nullopt, {}, 0.0,
                        std::chrono::duration<double>(t1 - t0).count(), 0.0};
  try {
    report.almost_sure = check_almost_sure(report.quotient.chain);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotIrreducible && e.code() != ErrorCode::NotAperiodic) throw;
    report.almost_sure_error = e.what();
  }
  report.almost_sure_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
  return report;
}

bool absolutely_stable(const AnalysisReport& report) { return report.absolute.decision == Decision::Convergent; }

bool almost_surely_stable(const AnalysisReport& report) {
  return absolutely_stable(report) ||
         (report.almost_sure && report.almost_sure->decision == Decision::Convergent);
}

int exit_code(const AnalysisReport& report) {
  const bool abs = absolutely_stable(report);
  const bool as = almost_surely_stable(report);
  if (abs && as) return 0;
  if (as) return 10;
  if (abs) return 20;
  return 30;
}

Json analysis_to_json(const AnalysisReport& report, const RunContext& ctx) {
  const StateNamer name = quotient_state_namer(report.quotient);
  Json out{{"schema", std::string(kReportSchema)},
           {"command", ctx.command},
           {"input", {{"path", ctx.input_path},
                      {"sha256", ctx.input_sha256},
                      {"kind", ctx.kind == InputKind::Model ? "ppcd" : "wdtmc"}}}};
  out["quotient"] = {{"states", report.quotient.chain.size()}, {"edges", report.quotient.chain.edges().size()}};
  out["absolute"] = verdict_to_json(report.absolute, name);
  if (report.almost_sure) {
    out["almost_sure"] = verdict_to_json(*report.almost_sure, name);
  } else {
    out["almost_sure"] = {{"decision", absolutely_stable(report) ? "Convergent" : "Indeterminate"},
                          {"witness", {{"kind", "None"}}},
                          {"error", report.almost_sure_error}};
  }
  const auto* ew = report.almost_sure ? std::get_if<EffectiveWeight>(&report.almost_sure->witness) : nullptr;
  out["effective_weight_log"] = ew ? Json(ew->float_log) : Json(nullptr);
  out["stable"] = {{"absolute", absolutely_stable(report)}, {"almost_sure", almost_surely_stable(report)}};
  out["timings"] = {{"build_seconds", report.build_seconds},
                    {"absolute_seconds", report.absolute_seconds},
                    {"almost_sure_seconds", report.almost_sure_seconds}};
  out["exit_code"] = exit_code(report);
  return out;
}

std::string analysis_to_text(const AnalysisReport& report, const RunContext& ctx) {
  const StateNamer name = quotient_state_namer(report.quotient);
  std::ostringstream os;
  os << "input        " << ctx.input_path << " (" << (ctx.kind == InputKind::Model ? "ppcd" : "wdtmc") << ", sha256 "
     << ctx.input_sha256.substr(0, 16) << ")\n";
  os << "chain        " << report.quotient.chain.size() << " states, " << report.quotient.chain.edges().size()
     << " edges\n";
  os << "absolute:    " << verdict_text(report.absolute, name) << "\n";
  if (report.almost_sure) {
    os << "almost_sure: " << verdict_text(*report.almost_sure, name) << "\n";
  } else {
    os << "almost_sure: " << (absolutely_stable(report) ? "Convergent  (implied by absolute; " : "Indeterminate  (")
       << report.almost_sure_error << ")\n";
  }
  os << "timings      build " << seconds_str(report.build_seconds) << " s, absolute "
     << seconds_str(report.absolute_seconds) << " s, almost-sure " << seconds_str(report.almost_sure_seconds)
     << " s\n";
  return os.str();
}

Json experiment_manifest(const ExperimentConfig& cfg) {
  return {{"generator", std::string(kGeneratorVersion)},
          {"rng", std::string(kRngAlgorithm)},
          {"experiment", cfg.experiment},
          {"locs_per_region", cfg.locs_per_region},
          {"coefficient_range", {cfg.coefficient_lo, cfg.coefficient_hi}},
          {"seed", cfg.seed},
          {"stall", rat_fraction(experiment_stall())},
          {"switch_targets", "every location of the next region"},
          {"switch_weights", "independent uniform integers 1..9, normalized"}};
}

std::string bench_header() { return "Exp  Locs  T_conv  T_abs  T_as  AS  ASS"; }

std::string bench_row(const ExperimentConfig& cfg, std::size_t locations, const AnalysisReport& report) {
  std::ostringstream os;
  os << cfg.experiment << "  " << locations << "  " << seconds_str(report.build_seconds) << "  "
     << seconds_str(report.absolute_seconds) << "  " << seconds_str(report.almost_sure_seconds) << "  "
     << (absolutely_stable(report) ? "Yes" : "No") << " " << (almost_surely_stable(report) ? "Yes" : "No");
  return os.str();
}

}  // namespace ppcdstab
