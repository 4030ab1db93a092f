/*
 * Copyright 2026 The HSA Toolkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hsa/cli.h"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "hsa/audit.h"
#include "hsa/protocol.h"
#include "hsa/rate_region.h"
#include "hsa/scheme.h"
#include "json.hpp"

namespace hsa {
namespace {

constexpr uint64_t kDefaultSeed = 20240917;

struct Common {
  bool json = false;
  bool pretty = false;
  std::string out_path;
};

int ExitFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kFailedPrecondition:
      return kExitInfeasible;
    case absl::StatusCode::kDataLoss:
      return kExitCorrupt;
    case absl::StatusCode::kResourceExhausted:
      return kExitBudget;
    default:
      return kExitDomain;
  }
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitFor(status);
}

std::string Dump(const nlohmann::json& j, bool pretty) {
  return j.dump(pretty ? 2 : -1) + "\n";
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    return absl::InvalidArgumentError(absl::StrCat("cannot write ", path));
  file << contents;
  return file ? absl::OkStatus()
              : absl::InvalidArgumentError(absl::StrCat("cannot write ", path));
}

// Prints to stdout, or to --out when given.
int Emit(const Common& common, const std::string& text, std::ostream& out,
         std::ostream& err) {
  if (common.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  if (absl::Status s = WriteFile(common.out_path, text); !s.ok()) {
    return Fail(s, err);
  }
  return kExitOk;
}

// Any failure to obtain a valid scheme is a corrupt-input failure.
absl::StatusOr<CoefficientScheme> LoadScheme(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    return absl::DataLossError(absl::StrCat("cannot read scheme file ", path));
  }
  nlohmann::json j = nlohmann::json::parse(file, nullptr, false);
  if (j.is_discarded()) {
    return absl::DataLossError(absl::StrCat(path, " is not valid JSON"));
  }
  absl::StatusOr<CoefficientScheme> scheme = ImportScheme(j);
  if (!scheme.ok()) {
    return absl::DataLossError(
        absl::StrCat(path, ": ", scheme.status().message()));
  }
  return scheme;
}

absl::StatusOr<IntRange> ParseRange(absl::string_view text) {
  std::vector<std::string> parts = absl::StrSplit(text, "..");
  IntRange range;
  if (parts.size() == 1 && absl::SimpleAtoi(parts[0], &range.first)) {
    range.last = range.first;
    return range;
  }
  if (parts.size() == 2 && absl::SimpleAtoi(parts[0], &range.first) &&
      absl::SimpleAtoi(parts[1], &range.last)) {
    return range;
  }
  return absl::InvalidArgumentError(absl::StrCat("bad range '", text, "'"));
}

// --sweep U=2..4 V=1..3 T=0..6
absl::Status ParseSweep(const std::vector<std::string>& items, IntRange& u,
                        IntRange& v, IntRange& t) {
  bool seen_u = false, seen_v = false, seen_t = false;
  for (const std::string& item : items) {
    std::vector<std::string> kv = absl::StrSplit(item, absl::MaxSplits('=', 1));
    if (kv.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("sweep item '", item, "' is not NAME=RANGE"));
    }
    absl::StatusOr<IntRange> range = ParseRange(kv[1]);
    if (!range.ok()) return range.status();
    if (kv[0] == "U") {
      u = *range;
      seen_u = true;
    } else if (kv[0] == "V") {
      v = *range;
      seen_v = true;
    } else if (kv[0] == "T") {
      t = *range;
      seen_t = true;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown sweep variable '", kv[0], "'"));
    }
  }
  if (!seen_u || !seen_v || !seen_t) {
    return absl::InvalidArgumentError("sweep needs U=, V= and T= ranges");
  }
  return absl::OkStatus();
}

nlohmann::json RateRowJson(const RateTableRow& row) {
  nlohmann::json j{{"U", row.cfg.relays},
                   {"V", row.cfg.users_per_relay},
                   {"T", row.cfg.max_colluders},
                   {"feasible", row.region.feasible},
                   {"baseline", row.baseline},
                   {"active_branch", RateBranchName(row.region.branch)}};
  if (row.region.feasible) {
    j["R_X"] = row.region.message_rate;
    j["R_Y"] = row.region.relay_message_rate;
    j["R_Z"] = row.region.key_rate;
    j["R_Zsigma"] = row.region.source_key_rate;
  }
  return j;
}

int CmdRates(const Common& common, std::optional<int> u, std::optional<int> v,
             std::optional<int> t, const std::vector<std::string>& sweep,
             std::ostream& out, std::ostream& err) {
  IntRange ur, vr, tr;
  if (!sweep.empty()) {
    if (absl::Status s = ParseSweep(sweep, ur, vr, tr); !s.ok()) {
      return Fail(s, err);
    }
  } else if (u && v && t) {
    ur = {*u, *u};
    vr = {*v, *v};
    tr = {*t, *t};
  } else {
    return Fail(
        absl::InvalidArgumentError("rates needs --U --V --T or --sweep"), err);
  }
  absl::StatusOr<std::vector<RateTableRow>> rows = RateTable(ur, vr, tr);
  if (!rows.ok()) return Fail(rows.status(), err);
  if (common.json) {
    nlohmann::json j = nlohmann::json::array();
    for (const RateTableRow& row : *rows) j.push_back(RateRowJson(row));
    return Emit(common, Dump(j, common.pretty), out, err);
  }
  return Emit(common, RateTableCsv(*rows), out, err);
}

int CmdBuild(const Common& common, int u, int v, int t,
             std::optional<uint64_t> q, bool baseline, bool force,
             std::ostream& out, std::ostream& err) {
  const HsaConfig cfg{u, v, t};
  absl::StatusOr<CoefficientScheme> scheme;
  if (baseline) {
    scheme = BuildBaseline(cfg, q, force);
  } else {
    BuildOptions options;
    options.q_hint = q;
    options.force_infeasible = force;
    scheme = BuildScheme(cfg, options);
  }
  if (!scheme.ok()) return Fail(scheme.status(), err);
  if (common.out_path.empty()) {
    return Fail(absl::InvalidArgumentError("build needs --out"), err);
  }
  if (absl::Status s = WriteFile(common.out_path,
                                 Dump(SchemeToJson(*scheme), common.pretty));
      !s.ok()) {
    return Fail(s, err);
  }
  const std::string gamma = scheme->params.gamma.has_value()
                                ? absl::StrCat(*scheme->params.gamma)
                                : "none";
  if (common.json) {
    nlohmann::json j{
        {"path", common.out_path},
        {"kind", SchemeKindName(scheme->kind)},
        {"q", scheme->field().modulus()},
        {"gamma", nullptr},
        {"n_source", scheme->params.n_source},
        {"insecure_by_construction", scheme->insecure_by_construction}};
    if (scheme->params.gamma) j["gamma"] = *scheme->params.gamma;
    out << Dump(j, common.pretty);
  } else {
    out << absl::StrFormat(
        "%s scheme for (U,V,T)=(%d,%d,%d): q=%d gamma=%s "
        "n_source=%d -> %s\n",
        SchemeKindName(scheme->kind), u, v, t, scheme->field().modulus(), gamma,
        scheme->params.n_source, common.out_path);
    if (scheme->insecure_by_construction) {
      out << "warning: insecure_by_construction (T >= (U-1)V)\n";
    }
  }
  return kExitOk;
}

int CmdSimulate(const Common& common, const std::string& path, int length,
                uint64_t seed, const std::string& transcript_path,
                std::ostream& out, std::ostream& err) {
  absl::StatusOr<CoefficientScheme> scheme = LoadScheme(path);
  if (!scheme.ok()) return Fail(scheme.status(), err);
  if (length < 1) {
    return Fail(absl::InvalidArgumentError("--L must be at least 1"), err);
  }
  SampledRound round = SampleRound(*scheme, length, seed);
  absl::StatusOr<RoundTranscript> t =
      RunRound(*scheme, round.inputs, round.source_keys);
  if (!t.ok()) return Fail(t.status(), err);
  t->scheme_ref = path;
  const SymbolVector truth = InputSum(scheme->field(), round.inputs);
  const bool correct = t->decoded == truth;
  if (!transcript_path.empty()) {
    if (absl::Status s =
            WriteFile(transcript_path,
                      Dump(TranscriptToJson(*scheme, *t), common.pretty));
        !s.ok()) {
      return Fail(s, err);
    }
  }
  const ObservedRates rates = MeasureRates(*t);
  if (common.json) {
    out << Dump(nlohmann::json{{"decoded", t->decoded},
                               {"input_sum", truth},
                               {"correct", correct},
                               {"rates",
                                {{"R_X", rates.message},
                                 {"R_Y", rates.relay_message},
                                 {"R_Z", rates.key},
                                 {"R_Zsigma", rates.source_key}}}},
                common.pretty);
  } else {
    out << "decoded:   " << absl::StrJoin(t->decoded, " ") << "\n";
    out << "input sum: " << absl::StrJoin(truth, " ") << "\n";
    out << absl::StrFormat("rates (R_X,R_Y,R_Z,R_Zsigma) = (%g,%g,%g,%g)\n",
                           rates.message, rates.relay_message, rates.key,
                           rates.source_key);
    out << (correct ? "correct\n" : "MISMATCH\n");
  }
  return correct ? kExitOk : kExitCorrupt;
}

std::string CollusionText(const CollusionSet& set) {
  std::vector<std::string> labels;
  for (UserId user : set)
    labels.push_back(absl::StrCat("(", UserLabel(user), ")"));
  return absl::StrCat("{", absl::StrJoin(labels, ","), "}");
}

int CmdAudit(const Common& common, const std::string& path, bool exact,
             uint64_t tuple_cap, uint64_t budget, std::ostream& out,
             std::ostream& err) {
  absl::StatusOr<CoefficientScheme> scheme = LoadScheme(path);
  if (!scheme.ok()) return Fail(scheme.status(), err);
  AuditOptions options;
  options.max_rank_checks = budget;
  absl::StatusOr<AuditReport> report = Audit(*scheme, options);
  if (!report.ok()) return Fail(report.status(), err);

  nlohmann::json j = AuditReportToJson(*report);
  bool exact_ok = true;
  if (exact) {
    uint64_t checks = 0;
    nlohmann::json failures = nlohmann::json::array();
    absl::Status failure;
    const HsaConfig& cfg = scheme->cfg();
    ForEachCollusionSet(cfg, cfg.max_colluders, [&](const CollusionSet& set) {
      std::vector<Observer> observers;
      for (int u = 1; u <= cfg.relays; ++u)
        observers.push_back(Observer::Relay(u));
      observers.push_back(Observer::Server());
      for (const Observer& o : observers) {
        absl::StatusOr<IndependenceVerdict> verdict =
            ExactIndependenceCheck(*scheme, o, set, tuple_cap);
        if (!verdict.ok()) {
          failure = verdict.status();
          return false;
        }
        ++checks;
        if (!verdict->independent) {
          failures.push_back(
              {{"kind", o.kind == Observer::Kind::kRelay ? "relay" : "server"},
               {"relay", o.kind == Observer::Kind::kRelay
                             ? nlohmann::json(o.relay)
                             : nlohmann::json(nullptr)},
               {"collusion", CollusionText(set)}});
        }
      }
      return true;
    });
    if (!failure.ok()) return Fail(failure, err);
    exact_ok = failures.empty();
    j["exact"] = {{"checks", checks},
                  {"independent", exact_ok},
                  {"failures", std::move(failures)}};
  }

  const bool clean = report->clean() && exact_ok;
  // The report is always JSON on stdout; the summary goes to stderr unless
  // --json asks for the report alone.
  out << Dump(j, common.pretty);
  if (!common.json) {
    err << absl::StrFormat("rank checks: %d  relay: %s  server: %s\n",
                           report->checks_performed,
                           report->relay_ok ? "ok" : "VIOLATED",
                           report->server_ok ? "ok" : "VIOLATED");
    for (const Violation& v : report->violations) {
      err << absl::StrFormat(
          "  %s%s colluding with %s: rank %d < %d\n",
          v.kind == ViolationKind::kRelay ? "relay " : "server",
          v.kind == ViolationKind::kRelay ? absl::StrCat(v.relay) : "",
          CollusionText(v.collusion), v.observed_rank, v.required_rank);
    }
    if (exact) {
      err << absl::StrFormat("exact independence (%d checks): %s\n",
                             j["exact"]["checks"].get<uint64_t>(),
                             exact_ok ? "zero mutual information" : "LEAKS");
    }
  }
  return clean ? kExitOk : kExitInsecure;
}

int CmdAttack(const Common& common, const std::string& path, int rounds,
              uint64_t seed, bool zero_inputs, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<CoefficientScheme> scheme = LoadScheme(path);
  if (!scheme.ok()) return Fail(scheme.status(), err);
  int successes = 0;
  Residue last_recovered = 0;
  for (int r = 0; r < rounds; ++r) {
    SampledRound round =
        SampleRound(*scheme, 1, seed + static_cast<uint64_t>(r));
    if (zero_inputs) {
      for (SymbolVector& w : round.inputs.values)
        std::fill(w.begin(), w.end(), 0);
    }
    absl::StatusOr<RoundTranscript> t =
        RunRound(*scheme, round.inputs, round.source_keys);
    if (!t.ok()) return Fail(t.status(), err);
    absl::StatusOr<AttackResult> result = InfeasibilityAttack(*scheme, *t);
    if (!result.ok()) return Fail(result.status(), err);
    if (result->success) ++successes;
    last_recovered = result->recovered[0];
  }
  const int colluders =
      (scheme->cfg().relays - 1) * scheme->cfg().users_per_relay;
  if (common.json) {
    out << Dump(nlohmann::json{{"rounds", rounds},
                               {"successes", successes},
                               {"colluders", colluders},
                               {"last_recovered", last_recovered}},
                common.pretty);
  } else {
    out << absl::StrFormat(
        "relay 1 + %d colluders recovered the cluster-1 input sum in %d/%d "
        "rounds\n",
        colluders, successes, rounds);
  }
  return kExitOk;
}

int CmdCompare(const Common& common, int u, int v, int t, std::ostream& out,
               std::ostream& err) {
  const HsaConfig cfg{u, v, t};
  absl::StatusOr<RateRegion> region = OptimalRates(cfg);
  if (!region.ok()) return Fail(region.status(), err);
  if (!region->feasible) {
    return Fail(
        absl::FailedPreconditionError(absl::StrCat(
            "InfeasibleConfiguration: T = ", t, " >= (U-1)V = ", (u - 1) * v)),
        err);
  }
  const int baseline = cfg.total_users() - 1;
  const int gap = baseline - region->source_key_rate;
  if (common.json) {
    return Emit(
        common,
        Dump(nlohmann::json{{"U", u},
                            {"V", v},
                            {"T", t},
                            {"optimal_R_Zsigma", region->source_key_rate},
                            {"baseline_R_Zsigma", baseline},
                            {"gap", gap},
                            {"active_branch", RateBranchName(region->branch)}},
             common.pretty),
        out, err);
  }
  return Emit(common,
              absl::StrFormat("scheme    R_X R_Y R_Z R_Zsigma\n"
                              "optimal   1   1   1   %d\n"
                              "baseline  1   1   1   %d\n"
                              "gap       %d\n",
                              region->source_key_rate, baseline, gap),
              out, err);
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Hierarchical secure aggregation toolkit"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_flag("--json", common.json, "Machine-readable JSON output");
    cmd->add_flag("--pretty", common.pretty, "Indent JSON output");
  };

  std::optional<int> u, v, t;
  std::vector<std::string> sweep;
  CLI::App* rates = app.add_subcommand("rates", "Optimal rate region table");
  rates->add_option("--U", u, "Relays");
  rates->add_option("--V", v, "Users per relay");
  rates->add_option("--T", t, "Colluding users");
  rates->add_option("--sweep", sweep, "Ranges, e.g. U=2..4 V=1..3 T=0..6");
  rates->add_option("--out", common.out_path, "Write to file");
  add_common(rates);

  int bu = 0, bv = 0, bt = 0;
  std::optional<uint64_t> q;
  bool baseline = false, force = false;
  CLI::App* build = app.add_subcommand("build", "Build and save a scheme");
  build->add_option("--U", bu, "Relays")->required();
  build->add_option("--V", bv, "Users per relay")->required();
  build->add_option("--T", bt, "Colluding users")->required();
  build->add_option("--q", q, "Field size to start the search from");
  build->add_flag("--baseline", baseline, "Identity-plus-parity baseline");
  build->add_flag("--force-infeasible", force,
                  "Allow T >= (U-1)V (attack demos only)");
  build->add_option("--out", common.out_path, "Scheme file")->required();
  add_common(build);

  std::string scheme_path, transcript_path;
  int length = 1;
  uint64_t seed = kDefaultSeed;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one round");
  simulate->add_option("--scheme", scheme_path, "Scheme file")->required();
  simulate->add_option("--L", length, "Input length in symbols");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--transcript", transcript_path, "Write transcript");
  add_common(simulate);

  bool exact = false;
  uint64_t tuple_cap = 10'000'000, budget = 1'000'000;
  CLI::App* audit = app.add_subcommand("audit", "Audit a scheme");
  audit->add_option("--scheme", scheme_path, "Scheme file")->required();
  audit->add_flag("--exact", exact, "Also run the exact independence check");
  audit->add_option("--q-cap", tuple_cap, "Max (W, N) tuples per exact check");
  audit->add_option("--budget", budget, "Max rank checks");
  add_common(audit);

  int attack_rounds = 100;
  bool zero_inputs = false;
  CLI::App* attack =
      app.add_subcommand("attack", "Relay 1 with all other clusters colluding");
  attack->add_option("--scheme", scheme_path, "Scheme file")->required();
  attack->add_option("--rounds", attack_rounds, "Rounds");
  attack->add_option("--seed", seed, "RNG seed");
  attack->add_flag("--zero-inputs", zero_inputs, "Use all-zero inputs");
  add_common(attack);

  int cu = 0, cv = 0, ct = 0;
  CLI::App* compare =
      app.add_subcommand("compare", "Optimal vs baseline source key rate");
  compare->add_option("--U", cu, "Relays")->required();
  compare->add_option("--V", cv, "Users per relay")->required();
  compare->add_option("--T", ct, "Colluding users")->required();
  compare->add_option("--out", common.out_path, "Write to file");
  add_common(compare);

  std::vector<std::string> argv(args.begin(), args.end());
  std::vector<const char*> raw;
  for (const std::string& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  if (rates->parsed()) return CmdRates(common, u, v, t, sweep, out, err);
  if (build->parsed()) {
    return CmdBuild(common, bu, bv, bt, q, baseline, force, out, err);
  }
  if (simulate->parsed()) {
    return CmdSimulate(common, scheme_path, length, seed, transcript_path, out,
                       err);
  }
  if (audit->parsed()) {
    return CmdAudit(common, scheme_path, exact, tuple_cap, budget, out, err);
  }
  if (attack->parsed()) {
    return CmdAttack(common, scheme_path, attack_rounds, seed, zero_inputs, out,
                     err);
  }
  return CmdCompare(common, cu, cv, ct, out, err);
}

}  // namespace hsa
