#include "cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "syncauto/dfa.hpp"
#include "syncauto/experiments.hpp"
#include "syncauto/fast_decide.hpp"
#include "syncauto/funcgraph.hpp"
#include "syncauto/oracle.hpp"

namespace syncauto {

namespace {

using nlohmann::ordered_json;

Dfa load_automaton(const std::string& in_path, std::istream& in) {
  std::string text;
  if (in_path.empty()) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(in_path);
    if (!f) throw std::runtime_error("cannot open input file: " + in_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  return parse_dfa(text);
}

void emit(const std::string& out_path, const std::string& payload, std::ostream& out) {
  if (out_path.empty()) {
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << payload;
    if (payload.empty() || payload.back() != '\n') f << '\n';
  }
}

ordered_json verdict_to_json(const Verdict& v, bool fast) {
  ordered_json j;
  j["synchronizing"] = v.synchronizing;
  if (std::holds_alternative<ResetWordCert>(v.certificate)) {
    j["certificate_type"] = "reset_word";
    j["certificate"] = std::get<ResetWordCert>(v.certificate).word;
  } else if (std::holds_alternative<DisconnectedCert>(v.certificate)) {
    const auto& c = std::get<DisconnectedCert>(v.certificate);
    j["certificate_type"] = "disconnected";
    j["certificate"] = ordered_json{{"components", c.count}, {"labels", c.label}};
  } else {
    const auto& c = std::get<DeadlockPairCert>(v.certificate);
    j["certificate_type"] = "deadlock_pair";
    j["certificate"] = ordered_json::array({c.p, c.q});
  }
  j["method"] = v.method;
  j["steps"] = v.steps;
  if (fast) {
    j["fallback"] = v.fallback;
    j["budget"] = v.budget;
  }
  return j;
}

std::vector<State> parse_grid(const std::string& text) {
  std::vector<State> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(State(std::stol(item)));
  }
  return grid;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"synchronizing automata toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate uniformly random automata");
  State gen_n = 0;
  Letter gen_k = 2;
  std::uint64_t gen_seed = 0;
  std::int64_t gen_count = 1;
  gen->add_option("-n", gen_n, "state count")->required();
  gen->add_option("-k", gen_k, "alphabet size");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--count", gen_count, "number of automata (one JSON per line)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "functional-graph decomposition of one letter");
  std::string analyze_in;
  Letter analyze_letter_idx = 0;
  analyze->add_option("--in", analyze_in, "automaton JSON file (default: stdin)");
  analyze->add_option("--letter", analyze_letter_idx, "letter index");

  // decide
  auto* decide = app.add_subcommand("decide", "decide synchronizability with a certificate");
  std::string decide_in;
  bool decide_fast = false;
  double decide_budget_scale = 1.0;
  decide->add_option("--in", decide_in, "automaton JSON file (default: stdin)");
  decide->add_flag("--fast", decide_fast, "use the budgeted pipeline with exact fallback");
  decide->add_option("--budget-scale", decide_budget_scale, "scale all pipeline budgets");

  // reset
  auto* reset = app.add_subcommand("reset", "emit a reset word as a letter-index array");
  std::string reset_in;
  bool reset_shortest = false;
  bool reset_allow_none = false;
  reset->add_option("--in", reset_in, "automaton JSON file (default: stdin)");
  reset->add_flag("--shortest", reset_shortest, "minimum-length word (subset search, n <= 16)");
  reset->add_flag("--allow-none", reset_allow_none,
                  "emit null instead of failing on non-synchronizing input");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "exhaustive counts over all automata");
  State enum_n = 0;
  Letter enum_k = 2;
  std::string enum_stat = "all";
  enumerate->add_option("-n", enum_n, "state count")->required();
  enumerate->add_option("-k", enum_k, "alphabet size");
  enumerate->add_option("--stat", enum_stat, "sync | disconnected-one | all")
      ->check(CLI::IsMember({"sync", "disconnected-one", "all"}));

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo estimation over random automata");
  std::string exp_metric = "sync-prob";
  std::string exp_grid = "64,128,256";
  std::int64_t exp_samples = 1000;
  std::uint64_t exp_seed = 0;
  Letter exp_k = 2;
  int exp_workers = 0;
  bool exp_exhaustive = false;
  std::string exp_out;
  experiment->add_option("--metric", exp_metric,
                         "sync-prob | cycle-tail | high-tree-fail | min-closed-small | "
                         "high-reach-fail | fast-fallback");
  experiment->add_option("--n-grid", exp_grid, "comma-separated state counts");
  experiment->add_option("--samples", exp_samples, "trials per grid point");
  experiment->add_option("--seed", exp_seed, "base seed");
  experiment->add_option("--k", exp_k, "alphabet size");
  experiment->add_option("--workers", exp_workers, "thread count (0 = all)");
  experiment->add_flag("--exhaustive", exp_exhaustive, "enumerate tables instead of sampling");
  experiment->add_option("--out", exp_out, "output file; .csv selects CSV, else JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (gen_n < 1 || gen_k < 1) {
        err << "usage error: -n and -k must be >= 1\n";
        return 2;
      }
      Rng rng(gen_seed);
      for (std::int64_t i = 0; i < gen_count; ++i)
        out << serialize_dfa(random_dfa(gen_n, gen_k, rng)) << '\n';
      return 0;
    }

    if (analyze->parsed()) {
      const Dfa d = load_automaton(analyze_in, in);
      if (analyze_letter_idx < 0 || analyze_letter_idx >= d.k) {
        err << "usage error: --letter must be in [0, " << d.k << ")\n";
        return 2;
      }
      const LetterGraph lg = analyze_letter(d, analyze_letter_idx);
      const HighTreeStats st = high_tree_stats(lg);
      ordered_json j;
      j["n"] = lg.n;
      j["letter"] = lg.letter;
      j["cluster"] = lg.cluster_id;
      j["level"] = lg.level;
      ordered_json cyc = ordered_json::array();
      for (State q = 0; q < lg.n; ++q) cyc.push_back(lg.is_cyclic(q));
      j["cyclic"] = std::move(cyc);
      j["clusters"] = ordered_json::array();
      for (const ClusterInfo& ci : lg.clusters)
        j["clusters"].push_back(ordered_json{{"size", ci.size},
                                             {"cycle_length", ci.cycle_length},
                                             {"cycle_states", ci.cycle_states}});
      j["tree_heights"] = lg.tree_heights;
      j["high_tree"] = ordered_json{{"h1", st.h1},       {"h2", st.h2},
                                    {"unique_highest", st.unique_highest},
                                    {"margin", st.margin}, {"n1", st.n1}, {"n2", st.n2}};
      out << j.dump(2) << '\n';
      return 0;
    }

    if (decide->parsed()) {
      const Dfa d = load_automaton(decide_in, in);
      Verdict v;
      if (decide_fast) {
        BudgetPolicy bp;
        bp.scale = decide_budget_scale;
        v = fast_decide(d, bp);
      } else {
        v = decide_exact(d);
      }
      out << verdict_to_json(v, decide_fast).dump(2) << '\n';
      return 0;
    }

    if (reset->parsed()) {
      const Dfa d = load_automaton(reset_in, in);
      std::optional<Word> w;
      if (reset_shortest) {
        if (d.n > 16) {
          err << "error: --shortest requires n <= 16 (got n=" << d.n << ")\n";
          return 1;
        }
        w = shortest_reset_word(d);
      } else {
        w = greedy_reset_word(d);
      }
      if (!w) {
        if (reset_allow_none) {
          out << "null\n";
          return 0;
        }
        err << "error: not synchronizing\n";
        return 1;
      }
      out << ordered_json(*w).dump() << '\n';
      return 0;
    }

    if (enumerate->parsed()) {
      const SmallCaseCounts c = exact_small_n(enum_n, enum_k);
      ordered_json j;
      j["n"] = c.n;
      j["k"] = c.k;
      j["total"] = c.total;
      if (enum_stat == "sync" || enum_stat == "all") j["synchronizing"] = c.synchronizing;
      if (enum_stat == "disconnected-one" || enum_stat == "all")
        j["one_disconnected"] = c.one_disconnected;
      if (enum_stat == "all") j["not_weakly_connected"] = c.not_weakly_connected;
      out << j.dump(2) << '\n';
      return 0;
    }

    if (experiment->parsed()) {
      const auto metric = metric_from_name(exp_metric);
      if (!metric) {
        err << "usage error: unknown metric \"" << exp_metric << "\"\n";
        return 2;
      }
      ExperimentSpec spec;
      spec.metric = *metric;
      spec.n_grid = parse_grid(exp_grid);
      spec.k = exp_k;
      spec.samples = exp_samples;
      spec.seed = exp_seed;
      spec.exhaustive = exp_exhaustive;
      const ExperimentReport rep = run_experiment(spec, exp_workers);
      const bool csv = exp_out.size() >= 4 && exp_out.substr(exp_out.size() - 4) == ".csv";
      emit(exp_out, csv ? report_to_csv(rep) : report_to_json(rep), out);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace syncauto
