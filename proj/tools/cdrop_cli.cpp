// Command-line front end: score, explain, sweep, oracle-check.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdrop/cdrop.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInput = 2;

int report_error(const cdrop::Error& e) {
  if (const auto* schema = dynamic_cast<const cdrop::io::SchemaError*>(&e)) {
    std::cerr << "invalid input:\n";
    for (const auto& v : schema->violations()) std::cerr << "  " << v.field << ": " << v.message << "\n";
    return kExitInput;
  }
  std::cerr << e.what() << "\n";
  return e.code() == cdrop::ErrorCode::IoFailure ? kExitIo : kExitInput;
}

void print_summary(const cdrop::ScoreReport& r) {
  std::fprintf(stderr, "Cw = %.4f bits, C = %.4f bits, U = %.4f bits", r.Cw.value(), r.C.value(), r.U.value());
  if (r.cognitive_probability) std::fprintf(stderr, ", p = %.4g", *r.cognitive_probability);
  else std::fprintf(stderr, ", p undefined (U < 0)");
  if (r.hypothesis_used) std::fprintf(stderr, ", hypothesis %s", r.hypothesis_used->c_str());
  std::fprintf(stderr, "\n");
}

cdrop::ScoreReport score(const cdrop::Scenario& s) {
  return s.events.size() == 2 ? cdrop::coincidence_score(s) : cdrop::unexpectedness(s);
}

int cmd_score(const std::string& path) {
  try {
    const auto s = cdrop::io::load_scenario(path);
    const auto report = score(s);
    std::cout << cdrop::io::to_json(report).dump(2) << "\n";
    print_summary(report);
    return kExitOk;
  } catch (const cdrop::Error& e) {
    return report_error(e);
  }
}

int cmd_explain(const std::string& path) {
  try {
    const auto s = cdrop::io::load_scenario(path);
    const auto report = score(s);
    const auto j = cdrop::io::explain_json(s, report);
    std::cout << j.dump(2) << "\n";

    std::fprintf(stderr, "%-44s %10s  %-16s %10s  %-16s\n", "atom", "W bits", "W rule", "O bits", "O rule");
    for (const auto& row : j.at("atoms")) {
      const auto cell = [](const cdrop::io::ordered_json& v) {
        return v.is_null() ? std::string("-") : std::to_string(v.get<double>()).substr(0, 10);
      };
      std::fprintf(stderr, "%-44s %10s  %-16s %10s  %-16s\n", row.at("atom").get<std::string>().c_str(),
                   cell(row.at("W_bits")).c_str(), row.at("W_rule").get<std::string>().c_str(),
                   cell(row.at("O_bits")).c_str(), row.at("O_rule").get<std::string>().c_str());
    }
    print_summary(report);
    return kExitOk;
  } catch (const cdrop::Error& e) {
    return report_error(e);
  }
}

int cmd_sweep(const std::string& spec_path) {
  try {
    const auto j = cdrop::io::read_json_file(spec_path);
    const auto spec = cdrop::parse_sweep_spec(j, std::filesystem::path(spec_path).parent_path());
    const auto rows = cdrop::run_sweep(spec);
    std::cout << cdrop::to_csv(rows);
    std::fprintf(stderr, "%zu rows\n", rows.size());
    return kExitOk;
  } catch (const cdrop::Error& e) {
    return report_error(e);
  }
}

int cmd_oracle_check(std::size_t max_len, double opcode_cost) {
  try {
    cdrop::InstructionCostModel model;
    model.opcode_cost = opcode_cost;
    model.check();
    const auto summary = cdrop::oracle::equivalence_sweep(max_len, model);
    for (const auto& m : summary.mismatches)
      std::printf("mismatch %s codec=%.6f oracle=%.6f\n", m.target.c_str(), m.codec.value(), m.oracle.value());
    std::printf("cases=%zu mismatches=%zu opcode_cost=%g\n", summary.cases, summary.mismatches.size(), opcode_cost);
    return summary.mismatches.empty() ? kExitOk : 1;
  } catch (const cdrop::Error& e) {
    return report_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complexity-drop scoring of coincidences and encounters"};
  app.require_subcommand(1);

  std::string score_path;
  auto* score_cmd = app.add_subcommand("score", "Score a scenario file; JSON report on stdout");
  score_cmd->add_option("file", score_path, "Scenario JSON")->required();

  std::string explain_path;
  auto* explain_cmd = app.add_subcommand("explain", "Per-atom bit breakdown for both machines");
  explain_cmd->add_option("file", explain_path, "Scenario JSON")->required();

  std::string sweep_spec;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one scenario field; CSV on stdout");
  sweep_cmd->add_option("--spec", sweep_spec, "Sweep spec JSON")->required();

  std::size_t max_len = 4;
  double opcode_cost = 2.0;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the digit codec with brute-force search");
  oracle_cmd->add_option("--max-len", max_len, "Longest digit string (1-5)")->check(CLI::Range(1, 5));
  oracle_cmd->add_option("--opcode-cost", opcode_cost, "Bits per opcode")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*score_cmd) return cmd_score(score_path);
  if (*explain_cmd) return cmd_explain(explain_path);
  if (*sweep_cmd) return cmd_sweep(sweep_spec);
  return cmd_oracle_check(max_len, opcode_cost);
}
