#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ppcdstab/bench.hpp"
#include "ppcdstab/ppcd.hpp"
#include "ppcdstab/wdtmc.hpp"

namespace ppcdstab {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "ppcd-stab/1";

/// Always "num/den", also for integers.
std::string rat_fraction(const Rat& r);
/// Accepts "a/b", "a", or a JSON integer. Throws Error(Parse).
Rat rat_from_json(const Json& j);

// Chain files:
//   {"states": [names], "initial": name,
//    "edges": [{"src": name, "dst": name, "prob": "a/b", "weight": {"ratio": "a/b"} | "inf"}]}
Json chain_to_json(const Wdtmc& chain);
/// Structure only; row sums etc. are left to validate(). Throws Error(Parse)
/// or Error(UnknownState).
Wdtmc chain_from_json(const Json& j);

// Model files:
//   {"locations": [{"id": ..., "sector": {"lo": [dx, dy], "hi": [dx, dy]},
//                   "flow": ["a/b", "c/d"] | {"a": ..., "b": ..., "orient": "ccw" | "cw"},
//                   "guard": "lo" | "hi" | [dx, dy],
//                   "switch": {id: "p/q", ...}, "stall": "p/q" (optional)}],
//    "initial": {"location": ..., "facet": "lo" | "hi"}}
Json ppcd_to_json(const Ppcd& model);
Ppcd ppcd_from_json(const Json& j);

enum class InputKind { Chain, Model };
/// By top-level key: "locations" or "states". Throws Error(Parse).
InputKind detect_input_kind(const Json& j);

/// Hex SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

/// JSON rendering of one state inside a witness.
using StateNamer = std::function<Json(StateId)>;
StateNamer chain_state_namer(const Wdtmc& chain);
StateNamer quotient_state_namer(const Quotient& q);

Json verdict_to_json(const Verdict& v, const StateNamer& name);

/// Absolute and almost-sure analysis of a chain given directly; the returned
/// quotient has no (location, facet) labels and build_seconds = 0.
AnalysisReport analyze_chain(Wdtmc chain);

/// 0 both stable, 10 almost-sure only, 20 absolute only, 30 neither.
/// Absolute convergence implies almost-sure convergence, so an unavailable
/// almost-sure check does not demote an absolutely convergent system.
int exit_code(const AnalysisReport& report);
bool absolutely_stable(const AnalysisReport& report);
bool almost_surely_stable(const AnalysisReport& report);

struct RunContext {
  std::vector<std::string> command;
  std::string input_path;
  std::string input_sha256;
  InputKind kind = InputKind::Model;
};

Json analysis_to_json(const AnalysisReport& report, const RunContext& ctx);
std::string analysis_to_text(const AnalysisReport& report, const RunContext& ctx);

Json experiment_manifest(const ExperimentConfig& cfg);

/// "Exp Locs T_conv T_abs T_as AS ASS".
std::string bench_header();
std::string bench_row(const ExperimentConfig& cfg, std::size_t locations, const AnalysisReport& report);

}  // namespace ppcdstab
