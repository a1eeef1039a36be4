#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "maxreal/bench.hpp"
#include "maxreal/encoding.hpp"
#include "maxreal/ltl.hpp"
#include "maxreal/specfile.hpp"
#include "maxreal/synth.hpp"
#include "maxreal/transition_system.hpp"

namespace fs = std::filesystem;
using namespace maxreal;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct CommonFlags {
  synth::SynthesisOptions opts;
  std::string out_dir = ".";
  std::string schedule = "step2";
  std::string backend = "builtin";
  std::string scheme;
  long long threshold = -1;
  bool emit_wcnf = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--min-bound", opts.min_bound, "smallest implementation bound");
    cmd->add_option("--max-bound", opts.max_bound, "largest implementation bound");
    cmd->add_option("--schedule", schedule, "bound schedule: step1, step2, doubling")
        ->check(CLI::IsMember({"step1", "step2", "doubling"}));
    cmd->add_option("--threshold", threshold, "stop once this satisfied weight is reached");
    cmd->add_option("--timeout-s", opts.timeout_s, "wall-clock budget in seconds (0 = none)");
    cmd->add_option("--backend", backend, "MaxSAT backend")
        ->check(CLI::IsMember({"builtin", "external"}));
    cmd->add_option("--solver-cmd", opts.solver_cmd, "external solver command (gets the wcnf path)");
    cmd->add_option("--out", out_dir, "output directory for artifacts");
    cmd->add_flag("--emit-wcnf", emit_wcnf, "also write the WDIMACS instance of each bound");
    cmd->add_option("--scheme", scheme,
                    "weight scheme override: default, general, priority, priority_strict, user")
        ->check(CLI::IsMember({"default", "general", "priority", "priority_strict", "user"}));
  }

  void finish(ltl::SpecProblem& p) {
    if (schedule == "step1") opts.schedule = synth::BoundSchedule::Step1;
    else if (schedule == "doubling") opts.schedule = synth::BoundSchedule::Doubling;
    else opts.schedule = synth::BoundSchedule::Step2;
    opts.backend = backend == "external" ? synth::Backend::External : synth::Backend::Builtin;
    if (threshold >= 0) opts.threshold = threshold;
    if (scheme == "default") p.scheme = ltl::WeightScheme::Default;
    else if (scheme == "general") p.scheme = ltl::WeightScheme::General;
    else if (scheme == "priority") p.scheme = ltl::WeightScheme::PriorityOrdered;
    else if (scheme == "priority_strict") p.scheme = ltl::WeightScheme::PriorityStrict;
    else if (scheme == "user") p.scheme = ltl::WeightScheme::User;
  }
};

int run_synth(ltl::SpecProblem p, CommonFlags& flags, const std::string& stem) {
  flags.finish(p);
  if (flags.emit_wcnf) {
    auto aut = enc::build_problem_automata(p);
    for (int b = flags.opts.min_bound; b <= flags.opts.max_bound;
         b = flags.schedule == "step1" ? b + 1 : flags.schedule == "doubling" ? 2 * b : b + 2) {
      auto ep = enc::encode_problem(p, aut, b);
      write_file(fs::path(flags.out_dir) / (stem + "_b" + std::to_string(b) + ".wcnf"),
                 enc::to_wdimacs(ep.wcnf));
    }
  }
  auto result = synth::synthesize_max(p, flags.opts);
  std::string report = synth::run_report(result);
  write_file(fs::path(flags.out_dir) / (stem + "_report.txt"), report);
  std::cout << report;
  if (!result.implementation) return 2;
  write_file(fs::path(flags.out_dir) / (stem + ".dot"), ts::to_dot(*result.implementation));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded maximum realizability: LTL synthesis via partial weighted MaxSAT"};
  app.require_subcommand(1);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "synthesize an implementation from a spec file");
  std::string spec_path;
  synth_cmd->add_option("spec", spec_path, "spec file")->required();
  CommonFlags synth_flags;
  synth_flags.add_to(synth_cmd);

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "write the WDIMACS encoding of one bound");
  std::string enc_spec;
  int enc_bound = 2;
  std::string enc_out = ".";
  encode_cmd->add_option("spec", enc_spec, "spec file")->required();
  encode_cmd->add_option("--bound", enc_bound, "implementation bound")->required();
  encode_cmd->add_option("--out", enc_out, "output directory");
  std::string enc_scheme;
  encode_cmd->add_option("--scheme", enc_scheme, "weight scheme override")
      ->check(CLI::IsMember({"default", "general", "priority", "priority_strict", "user"}));

  // check
  auto* check_cmd = app.add_subcommand("check", "model check an implementation against a spec");
  std::string chk_spec, chk_impl;
  check_cmd->add_option("spec", chk_spec, "spec file")->required();
  check_cmd->add_option("--impl", chk_impl, "implementation DOT file")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "generate and solve a benchmark instance");
  std::string family;
  int instance = 0;
  bench_cmd->add_option("family", family, "robot or power")->required();
  bench_cmd->add_option("instance", instance, "power instance id (1-12)");
  int bound_opt = -1;
  bench_cmd->add_option("--bound", bound_opt, "solve exactly this bound");
  CommonFlags bench_flags;
  bench_flags.add_to(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      auto p = spec::parse_spec_file(read_file(spec_path));
      return run_synth(std::move(p), synth_flags, fs::path(spec_path).stem().string());
    }

    if (encode_cmd->parsed()) {
      auto p = spec::parse_spec_file(read_file(enc_spec));
      CommonFlags f;
      f.scheme = enc_scheme;
      f.finish(p);
      auto aut = enc::build_problem_automata(p);
      auto ep = enc::encode_problem(p, aut, enc_bound);
      auto st = enc::stats(ep.wcnf);
      std::string stem = fs::path(enc_spec).stem().string() + "_b" + std::to_string(enc_bound);
      write_file(fs::path(enc_out) / (stem + ".wcnf"), enc::to_wdimacs(ep.wcnf));
      write_file(fs::path(enc_out) / (stem + ".varmap"), ep.vars.map_text());
      std::cout << "vars: " << st.vars << "\nclauses: " << st.clauses
                << "\nsoft_weight: " << st.total_soft_weight << "\n";
      return 0;
    }

    if (check_cmd->parsed()) {
      auto p = spec::parse_spec_file(read_file(chk_spec));
      auto t = ts::from_dot(read_file(chk_impl), p.inputs, p.outputs);
      bool ok = true;
      if (auto cex = ts::model_check_witness(t, p.hard)) {
        std::cout << "hard: violated on " << ts::format_witness(*cex) << "\n";
        ok = false;
      } else {
        std::cout << "hard: satisfied\n";
      }
      auto achieved = synth::achieved_relaxations(t, p.soft);
      for (size_t j = 0; j < achieved.size(); ++j) {
        std::cout << "soft_" << (j + 1) << ": ";
        if (achieved[j]->op == ltl::Op::True && !ltl::equal(achieved[j], p.soft[j].relax_chain.back()))
          std::cout << "none\n";
        else
          std::cout << ltl::to_string(achieved[j]) << "\n";
      }
      auto value = ts::compute_value(t, p.soft);
      std::cout << "value:";
      for (int v : value) std::cout << ' ' << v;
      std::cout << "\n";
      return ok ? 0 : 2;
    }

    if (bench_cmd->parsed()) {
      ltl::SpecProblem p;
      std::string stem;
      if (family == "robot") {
        p = bench::gen_robot();
        stem = "robot";
      } else if (family == "power") {
        p = bench::gen_power(bench::power_instance(instance));
        stem = "power" + std::to_string(instance);
      } else {
        throw std::runtime_error("unknown benchmark family '" + family + "'");
      }
      if (bound_opt > 0) {
        bench_flags.opts.min_bound = bound_opt;
        bench_flags.opts.max_bound = bound_opt;
      }
      write_file(fs::path(bench_flags.out_dir) / (stem + ".spec"), spec::emit_spec_file(p));
      return run_synth(std::move(p), bench_flags, stem);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
