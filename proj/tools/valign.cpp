#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "valign/engine.hpp"
#include "valign/experiments.hpp"
#include "valign/generator.hpp"
#include "valign/metrics.hpp"
#include "valign/protocol_io.hpp"
#include "valign/satisfiability.hpp"

namespace fs = std::filesystem;
using namespace valign;

namespace {

// Configuration problems: bad files, inconsistent parameters.
constexpr int kConfigError = 2;

struct GenOptions {
  std::size_t vocab_size = 10;
  std::size_t constraints = 10;
  unsigned bound = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string pair_out;
  std::string alignment_out;
};

struct RunOptions {
  std::string protocol_a;
  std::string protocol_b;
  std::string alignment;
  std::string strategy = "reasoning";
  std::uint64_t seed = 1;
  std::size_t interactions = 1;
  std::string log;
  std::string state_out;
};

struct ExpOptions {
  ExperimentConfig config;
  std::string strategy = "reasoning";
  std::string csv;
  double quality = -1.0;
};

struct CheckOptions {
  std::string protocol;
  std::string trace;
  std::string compatible_with;
  std::string alignment;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_gen(const GenOptions& o) {
  const unsigned bound = o.bound ? o.bound : static_cast<unsigned>(o.vocab_size);
  Rng rng(o.seed);
  if (o.pair_out.empty()) {
    const Protocol p = generate_protocol(o.vocab_size, o.constraints, bound, rng);
    save_protocol(p, o.out);
    std::cout << "wrote " << o.out << " (" << p.constraints.size() << " constraints)\n";
    return 0;
  }
  const CompatiblePair pair = generate_compatible_pair(o.vocab_size, o.constraints, bound, rng);
  save_protocol(pair.first, o.out);
  save_protocol(pair.second, o.pair_out);
  if (!o.alignment_out.empty()) save_alignment(pair.alignment, o.alignment_out);
  std::cout << "wrote " << o.out << " and " << o.pair_out;
  if (!o.alignment_out.empty()) std::cout << " aligned by " << o.alignment_out;
  std::cout << '\n';
  return 0;
}

nlohmann::ordered_json log_json(std::size_t interaction, const InteractionLogRecord& r) {
  nlohmann::ordered_json j;
  j["interaction"] = interaction;
  j["position"] = r.position;
  j["speaker"] = agent_name(r.speaker);
  j["word_sent"] = r.word_sent;
  j["word_interpreted"] = r.word_interpreted ? nlohmann::json(*r.word_interpreted) : nlohmann::json(nullptr);
  j["possible_set_size"] = r.possible_set_size;
  j["violated_constraints"] = r.violated_constraints;
  return j;
}

int cmd_run(const RunOptions& o) {
  const Protocol pa = load_protocol(o.protocol_a);
  const Protocol pb = load_protocol(o.protocol_b);
  const AlignmentRelation alpha = load_alignment(o.alignment);
  if (pa.bound != pb.bound) throw std::invalid_argument("protocols have different bounds");
  if (!alpha.is_bijective_on(pb.vocabulary)) {
    throw std::invalid_argument("alignment must map protocol-b's vocabulary bijectively");
  }
  const Strategy strategy = parse_strategy(o.strategy);

  CompiledProtocol ca(pa), cb(pb);
  InterpretationState l1(pa.vocabulary, LearnerConfig::defaults(strategy, pa.vocabulary.size()));
  InterpretationState l2(pb.vocabulary, LearnerConfig::defaults(strategy, pb.vocabulary.size()));
  const AlignmentRelation inverse = alpha.inverse();

  std::optional<std::ofstream> log;
  if (!o.log.empty()) {
    log.emplace(o.log, std::ios::binary);
    if (!*log) throw std::runtime_error("cannot write " + o.log);
  }

  Rng rng = Rng::derive(o.seed, {0, 2});
  Rng eval = Rng::derive(o.seed, {0, 3});
  EnginePolicy policy;
  policy.record_log = log.has_value();
  for (std::size_t i = 0; i < o.interactions; ++i) {
    AgentRuntime a1(AgentId::agent1, ca, l1);
    AgentRuntime a2(AgentId::agent2, cb, l2);
    const InteractionOutcome out = run_interaction(a1, a2, policy, rng, &alpha);
    std::cout << i << ' ' << status_name(out.status) << ' ' << out.length << " [" << format_trace(out.transcript)
              << "]\n";
    if (log) {
      for (const auto& r : out.log) *log << log_json(i, r).dump() << '\n';
    }
  }
  std::cout << "f_score agent1 " << f_score(l1.extract_alignment(eval), alpha) << '\n';
  std::cout << "f_score agent2 " << f_score(l2.extract_alignment(eval), inverse) << '\n';
  if (!o.state_out.empty()) {
    std::ofstream out(o.state_out, std::ios::binary);
    write_alignment_lines(out, l1.dump());
  }
  return 0;
}

int cmd_exp(ExpOptions o, bool repair) {
  ExperimentConfig& c = o.config;
  c.strategy_agent1 = c.strategy_agent2 = parse_strategy(o.strategy);
  if (repair) {
    if (o.quality < 0.0) throw std::invalid_argument("repair needs --quality");
    c.prior_quality = o.quality;
  }
  c.validate();
  const ExperimentResult r = repair ? run_repair(c) : run_convergence(c);
  if (!o.csv.empty()) {
    write_text(o.csv, curve_csv(c, r));
    write_text(o.csv + ".meta.json", experiment_metadata_json(c, r));
  }
  const auto first = r.first_reaching(kConvergenceThreshold);
  std::cout << "strategy " << c.strategy_label() << ", " << c.n_constraints << " constraints, " << c.vocab_size
            << " words\n";
  std::cout << "initial f " << r.curve.front().mean_f_score << ", final f " << r.curve.back().mean_f_score << " +- "
            << r.curve.back().stderr_f_score << '\n';
  std::cout << "first interaction reaching 0.8: " << (first ? std::to_string(*first) : "none") << '\n';
  return 0;
}

int cmd_check(const CheckOptions& o) {
  const Protocol p = load_protocol(o.protocol);
  CompiledProtocol cp(p);
  std::cout << "satisfiable " << (cp.is_satisfiable() ? "yes" : "no") << '\n';
  if (!o.compatible_with.empty()) {
    if (o.alignment.empty()) throw std::invalid_argument("--compatible-with needs --alignment");
    const Protocol other = load_protocol(o.compatible_with);
    const bool ok = check_compatibility(p, other, load_alignment(o.alignment));
    std::cout << "compatible " << (ok ? "yes" : "no") << '\n';
  }
  const Trace t = parse_trace(o.trace);
  std::cout << "trace [" << format_trace(t) << "]\n";
  std::cout << "model " << (cp.is_model(t) ? "yes" : "no") << '\n';
  const bool partial = t.size() <= p.bound && cp.is_partial_model(t);
  std::cout << "partial model " << (partial ? "yes" : "no") << '\n';
  if (partial) {
    std::cout << "possible";
    for (const Message& m : cp.possible_messages(t)) std::cout << ' ' << format_message(m) << ';';
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vocabulary alignment through interaction protocols"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a random satisfiable protocol (or a compatible pair)");
  g->add_option("--vocab-size", gen.vocab_size)->check(CLI::PositiveNumber);
  g->add_option("--constraints", gen.constraints);
  g->add_option("--bound", gen.bound, "0: vocabulary size");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out)->required();
  g->add_option("--pair-out", gen.pair_out, "also write a compatible second protocol here");
  g->add_option("--alignment-out", gen.alignment_out, "true alignment of the pair (second -> first)");

  RunOptions run;
  auto* r = app.add_subcommand("run", "Let two agents interact on a protocol pair");
  r->add_option("--protocol-a", run.protocol_a)->required()->check(CLI::ExistingFile);
  r->add_option("--protocol-b", run.protocol_b)->required()->check(CLI::ExistingFile);
  r->add_option("--alignment", run.alignment, "true alignment, protocol-b words -> protocol-a words")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--strategy", run.strategy)->check(CLI::IsMember({"simple", "reasoning", "smart"}));
  r->add_option("--seed", run.seed);
  r->add_option("--interactions", run.interactions);
  r->add_option("--log", run.log, "JSON lines, one per message");
  r->add_option("--state-out", run.state_out, "agent 1's final weights");

  auto* e = app.add_subcommand("exp", "Experiments");
  e->require_subcommand(1);
  ExpOptions conv, rep;
  auto add_exp = [](CLI::App* sub, ExpOptions& o) {
    ExperimentConfig& c = o.config;
    sub->add_option("--vocab-size", c.vocab_size);
    sub->add_option("--constraints", c.n_constraints);
    sub->add_option("--interactions", c.n_interactions);
    sub->add_option("--reps", c.n_repetitions);
    sub->add_option("--strategy", o.strategy)->check(CLI::IsMember({"simple", "reasoning", "smart"}));
    sub->add_option("--seed", c.seed);
    sub->add_option("--bound", c.bound, "0: vocabulary size");
    sub->add_option("--p-new", c.p_new);
    sub->add_option("--p-stop", c.p_stop);
    sub->add_option("--jobs", c.jobs);
    sub->add_option("--csv", o.csv, "curve CSV; metadata goes to <csv>.meta.json");
  };
  auto* ec = e->add_subcommand("convergence", "Learning from scratch");
  add_exp(ec, conv);
  auto* er = e->add_subcommand("repair", "Learning from a prior alignment of given quality");
  add_exp(er, rep);
  er->add_option("--quality", rep.quality)->required()->check(CLI::Range(0.0, 1.0));

  CheckOptions check;
  auto* c = app.add_subcommand("check", "Inspect a protocol and a trace");
  c->add_option("--protocol", check.protocol)->required()->check(CLI::ExistingFile);
  c->add_option("--trace", check.trace, "e.g. \"A1:da bere, A2:birra\"");
  c->add_option("--compatible-with", check.compatible_with)->check(CLI::ExistingFile);
  c->add_option("--alignment", check.alignment)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : kConfigError;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_run(run);
    if (ec->parsed()) return cmd_exp(conv, false);
    if (er->parsed()) return cmd_exp(rep, true);
    if (c->parsed()) return cmd_check(check);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kConfigError;
  }
  return 0;
}
