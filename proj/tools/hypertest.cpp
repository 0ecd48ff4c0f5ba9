#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hypertest/cutnorm.hpp"
#include "hypertest/density.hpp"
#include "hypertest/energy.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/io.hpp"
#include "hypertest/regularity.hpp"
#include "hypertest/rng.hpp"
#include "hypertest/testers.hpp"
#include "hypertest/transfer.hpp"
#include "suite.hpp"

using namespace hypertest;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::optional<std::uint64_t> budget;
  unsigned threads = 0;
  std::string out;
  std::string meta;
};

std::uint64_t need_seed(const Globals& g, const std::string& why) {
  if (!g.seed) throw Error("--seed is required for " + why);
  return *g.seed;
}

Mode mode_or(const Globals& g, Mode fallback) { return g.mode.empty() ? fallback : parse_mode(g.mode); }

bool is_graph(const Json& j) { return j.is_object() && j.contains("n") && j.contains("colors"); }

SampleDistribution load_distribution(const Json& j, int q) {
  if (is_graph(j)) return sample_distribution(hypergraph_from_json(j), q);
  return sample_distribution(graphon_from_json(j), q);
}

Json csv_or_json_rows(const ProbeReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"q", r.q}, {"failures", r.failures}, {"trials", r.trials}, {"rate", r.rate},
                    {"ci_lo", r.ci.lo}, {"ci_hi", r.ci.hi}});
  return rows;
}

Json lift_json(const LiftReport& l) {
  Json j;
  j["delta_theory"] = l.delta_theory;
  j["delta_used"] = l.delta_used;
  j["classes"] = {{"P", l.t_p}, {"R", l.t_r}, {"S", l.t_s}, {"P2", l.t_pp}};
  Json st = Json::array();
  for (const auto& s : l.stages) st.push_back({{"name", s.name}, {"value", s.value}, {"note", s.note}});
  j["stages"] = st;
  j["discolor_error"] = l.discolor_error;
  if (l.tv >= 0) j["tv"] = l.tv;
  j["mode"] = "heuristic";
  return j;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypertest: colored hypergraphs, step graphons, cut norms, regularity and testers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "64-bit base seed for stochastic commands");
  app.add_option("--mode", g.mode, "exact | heuristic | mc")->check(CLI::IsMember({"exact", "heuristic", "mc"}));
  std::uint64_t budget_value = 0;
  auto* budget_opt = app.add_option("--budget", budget_value, "enumeration budget (overrides HYPERTEST_BUDGET)");
  app.add_option("--threads", g.threads, "worker threads (default: logical cores)");
  app.add_option("--out", g.out, "primary output file (default: stdout)");
  app.add_option("--meta", g.meta, "metadata file for timestamps and timings");

  // The primary artifact; filled by the selected subcommand.
  Json result;
  std::string text_result;
  int exit_code = 0;
  std::function<void()> action;

  std::string f_path, g_path, a_path, b_path, in_path, part_path, coupling_path, u_path, v_path, trace_path;
  std::string labeling = "uniform", witness_name = "signed-color-density", param_name = "edge-density",
              property_name = "complete", level = "desk", q_grid = "5,10,20,40";
  int q = 3, t = 2, k = 2, color = 0, trials = 400, qq = 4, q0 = 2;
  double eps = 0.25, delta = 0.1;
  std::uint64_t samples = 100000;

  auto* density = app.add_subcommand("density", "induced density t(F, G) or t(F, W)");
  density->add_option("--f", f_path, "pattern graph JSON")->required();
  density->add_option("--g", g_path, "host graph or graphon JSON")->required();
  density->add_option("--labeling", labeling, "uniform | sorted")->check(CLI::IsMember({"uniform", "sorted"}));
  density->add_option("--samples", samples, "Monte Carlo samples");
  density->callback([&] {
    action = [&] {
      const SampledColoredGraph f = sampled_graph_from_json(read_json_file(f_path));
      const Json host = read_json_file(g_path);
      const bool graph = is_graph(host);
      const Mode m = mode_or(g, Mode::exact);
      if (m == Mode::mc) {
        const std::uint64_t s = need_seed(g, "mc density");
        const DensityResult d = graph ? density_graph_mc(f, hypergraph_from_json(host), samples, s)
                                      : density_graphon_mc(f, graphon_from_json(host), samples, s);
        result = {{"value", d.value}, {"se", d.se}, {"mode", "mc"}};
      } else if (graph) {
        const Rational r = density_graph_exact(
            f, hypergraph_from_json(host), labeling == "sorted" ? SampleLabeling::sorted : SampleLabeling::uniform);
        result = to_json(r);
        result["mode"] = "exact";
      } else {
        const DensityResult d = density_graphon(f, graphon_from_json(host));
        result = {{"value", d.value}, {"mode", mode_name(d.mode)}};
      }
    };
  });

  auto* tvdist = app.add_subcommand("tvdist", "total variation between q-sample distributions");
  tvdist->add_option("--a", a_path)->required();
  tvdist->add_option("--b", b_path)->required();
  tvdist->add_option("--q", q, "sample size")->required();
  tvdist->callback([&] {
    action = [&] {
      const TvResult tv = tv_distance(load_distribution(read_json_file(a_path), q),
                                      load_distribution(read_json_file(b_path), q));
      result = {{"value", tv.half_sum}, {"half_sum", tv.half_sum}, {"max_event", tv.max_event}, {"mode", "exact"}};
    };
  });

  auto add_cut_inputs = [&](CLI::App* c) {
    c->add_option("--in", in_path, "array {r,n,values}, graph, or graphon JSON");
    c->add_option("--a", a_path, "first input for a cut distance");
    c->add_option("--b", b_path, "second input for a cut distance");
    c->add_option("--color", color, "graph input: use the indicator array of this color");
  };
  auto cut_array = [&](const Json& j) {
    if (is_graph(j)) {
      const ColoredHypergraph h = hypergraph_from_json(j);
      if (color < 1 || color > h.k()) throw Error("graph input to cutnorm needs --color in [1, k]");
      return SymArray::from_color(h, static_cast<Color>(color));
    }
    return sym_array_from_json(j);
  };

  auto* cutnorm_cmd = app.add_subcommand("cutnorm", "r-cut norm of an array or cut distance of two inputs");
  add_cut_inputs(cutnorm_cmd);
  cutnorm_cmd->callback([&] {
    action = [&] {
      const Mode m = mode_or(g, Mode::exact);
      const std::uint64_t s = m == Mode::heuristic ? need_seed(g, "heuristic cut norms") : 0;
      if (!a_path.empty() || !b_path.empty()) {
        const Json ja = read_json_file(a_path), jb = read_json_file(b_path);
        CutDistanceResult d;
        if (is_graph(ja) && is_graph(jb))
          d = cut_distance(hypergraph_from_json(ja), hypergraph_from_json(jb), m, s);
        else
          d = cut_distance(graphon_or_graph_from_json(ja), graphon_or_graph_from_json(jb), m, s);
        Json per = Json::array();
        for (const auto& c : d.per_color) per.push_back(to_json(c));
        result = {{"value", d.value}, {"mode", mode_name(d.mode)}, {"per_color", per}};
      } else {
        result = to_json(cutnorm(cut_array(read_json_file(in_path)), m, s));
      }
    };
  });

  auto* cutnorm_p_cmd = app.add_subcommand("cutnorm-p", "cut-P norm, or its sup over partitions with --t");
  add_cut_inputs(cutnorm_p_cmd);
  cutnorm_p_cmd->add_option("--partition", part_path, "partition JSON {n,r_minus_1,t,classes}");
  auto* sup_t = cutnorm_p_cmd->add_option("--t", t, "sup over partitions with at most t classes");
  cutnorm_p_cmd->callback([&] {
    action = [&] {
      const Mode m = mode_or(g, Mode::exact);
      const std::uint64_t s = m == Mode::heuristic ? need_seed(g, "heuristic cut norms") : 0;
      const SymArray a = cut_array(read_json_file(in_path));
      if (sup_t->count() > 0) {
        const SupResult sup = sup_cutnorm_over_partitions(a, t, m, s);
        result = {{"value", sup.value}, {"mode", mode_name(sup.mode)}, {"partition", sup.atom_class}};
      } else {
        if (part_path.empty()) throw Error("cutnorm-p needs --partition or --t");
        result = to_json(hypertest::cutnorm_p(a, tuple_partition_from_json(read_json_file(part_path)), m, s));
      }
    };
  });

  auto* gse_cmd = app.add_subcommand("gse", "ground state energy of a colored graph or graphon");
  gse_cmd->add_option("--in", in_path)->required();
  gse_cmd->add_option("--coupling", coupling_path, "coupling array JSON {k,q,r,arrays}")->required();
  gse_cmd->callback([&] {
    action = [&] {
      const Mode m = mode_or(g, Mode::heuristic);
      const std::uint64_t s = m == Mode::heuristic ? need_seed(g, "annealing") : 0;
      const Json in = read_json_file(in_path);
      const CouplingArray j = coupling_from_json(read_json_file(coupling_path));
      if (is_graph(in)) {
        const GraphGseResult r = gse(hypergraph_from_json(in), j, m, s);
        result = {{"value", r.value}, {"mode", mode_name(r.mode)}, {"partition", to_json(r.partition)}};
      } else {
        const GseResult r = gse_graphon(graphon_from_json(in), j, m, s);
        result = {{"value", r.value}, {"mode", mode_name(r.mode)}, {"atom_class", r.atom_class}};
      }
    };
  });

  auto* reg = app.add_subcommand("regularize", "weak regularity partition of a step graphon");
  reg->add_option("--in", in_path)->required();
  reg->add_option("--eps", eps)->required();
  reg->add_option("--t", t, "class multiplier of the test partitions");
  reg->add_option("--trace", trace_path, "CSV trace output");
  reg->callback([&] {
    action = [&] {
      RegularityOptions opt;
      opt.mode = mode_or(g, Mode::heuristic);
      if (opt.mode == Mode::heuristic) opt.seed = need_seed(g, "heuristic regularization");
      const RegularityResult r = weak_regularize(graphon_or_graph_from_json(read_json_file(in_path)), eps, t, opt);
      const ClassCountBound bound = class_count_bound(r.v.r(), r.v.k(), eps, t);
      result = {{"residual", r.achieved},    {"mode", mode_name(r.mode)},   {"rounds", r.rounds},
                {"converged", r.converged},  {"exhausted", r.exhausted},   {"monotone", r.monotone},
                {"classes", r.p.t()},        {"class_bound_log2", bound.log2}, {"within_bound", bound.admits(r.p.t())},
                {"graphon", to_json(r.v)}};
      if (!trace_path.empty()) {
        std::ofstream tr(trace_path);
        if (!tr) throw Error("cannot write " + trace_path);
        tr << trace_csv(r);
      }
    };
  });

  auto* sample = app.add_subcommand("sample", "draw a q-vertex sample of a graph or graphon");
  sample->add_option("--in", in_path)->required();
  sample->add_option("--q", q)->required();
  sample->callback([&] {
    action = [&] {
      const std::uint64_t s = need_seed(g, "sampling");
      const Json in = read_json_file(in_path);
      if (is_graph(in))
        result = to_json(sample_subgraph(hypergraph_from_json(in), q, s));
      else
        result = to_json(sample_graphon(graphon_from_json(in), q, s));
    };
  });

  auto* transfer = app.add_subcommand("transfer", "transfer the coloring of u_hat onto v");
  transfer->add_option("--u-hat", u_path, "[t]x[k]-colored graphon")->required();
  transfer->add_option("--v", v_path, "t-colored graphon")->required();
  transfer->add_option("--k", k)->required();
  transfer->callback([&] {
    action = [&] {
      const StepGraphon uh = graphon_or_graph_from_json(read_json_file(u_path));
      const StepGraphon v = graphon_or_graph_from_json(read_json_file(v_path));
      const StepGraphon out = transfer_coloring(uh, v, k);
      const CutDistanceResult d = cut_distance(discolor(out, k), v, Mode::exact);
      result = {{"graphon", to_json(out)}, {"discolor_cut_distance", d.value}, {"mode", "exact"}};
    };
  });

  auto* nd = app.add_subcommand("nd-estimate", "sample, color, lift and round a witness coloring");
  nd->add_option("--in", in_path, "simple graph JSON")->required();
  nd->add_option("--witness", witness_name)->check(CLI::IsMember(parameter_names()));
  nd->add_option("--k", k);
  nd->add_option("--q", q)->required();
  nd->add_option("--q0", q0);
  nd->add_option("--delta", delta);
  nd->callback([&] {
    action = [&] {
      LiftOptions opt;
      opt.seed = need_seed(g, "nd-estimate");
      opt.q0 = q0;
      opt.delta = delta;
      const ParameterFn w = lookup_parameter(witness_name, k);
      const NdEstimateReport r = nd_estimate_pipeline(hypergraph_from_json(read_json_file(in_path)), k, w.fn, q, opt);
      result = {{"f_hat", r.f_hat},   {"transferred", r.transferred}, {"gap", r.gap},
                {"mode", "heuristic"}, {"sample_vertices", r.sample_vertices},
                {"sample_coloring", to_json(r.sample_coloring)}, {"coloring", to_json(r.g_coloring)},
                {"lift", lift_json(r.lift)}};
    };
  });

  auto* probe = app.add_subcommand("probe", "empirical sample complexity of a parameter");
  probe->add_option("--in", in_path)->required();
  probe->add_option("--param", param_name)->check(CLI::IsMember(parameter_names()));
  probe->add_option("--k", k, "refinement palette for witness parameters");
  probe->add_option("--eps", eps)->required();
  probe->add_option("--q-grid", q_grid, "comma-separated sample sizes");
  probe->add_option("--trials", trials);
  probe->callback([&] {
    action = [&] {
      const ProbeReport r = probe_sample_complexity(lookup_parameter(param_name, k),
                                                    hypergraph_from_json(read_json_file(in_path)), eps,
                                                    parse_int_list(q_grid), trials, need_seed(g, "probing"));
      result = {{"eps", r.eps}, {"rows", csv_or_json_rows(r)}, {"monotone", r.monotone}, {"mode", "mc"}};
      result["q_star"] = r.q_star ? Json(*r.q_star) : Json();
    };
  });

  auto* prop = app.add_subcommand("prop-test", "run the property tester built from the trivial witness");
  prop->add_option("--in", in_path)->required();
  prop->add_option("--property", property_name)->check(CLI::IsMember({"complete"}));
  prop->add_option("--k", k);
  prop->add_option("--q", q)->required();
  prop->add_option("--qq", qq, "witness sample size");
  prop->add_option("--trials", trials);
  prop->add_option("--eps", eps, "distance used to report eps-farness");
  prop->callback([&] {
    action = [&] {
      const ColoredHypergraph h = hypergraph_from_json(read_json_file(in_path));
      const PropertyFn p = lookup_property(property_name, k);
      const PropertyTester tester = trivial_complete_tester(k, qq);
      const AcceptanceReport r = acceptance_frequency(tester, h, q, trials, need_seed(g, "property testing"));
      result = {{"member", p.member(h)},
                {"eps_far", eps_far(p, h, eps)},
                {"accepts", r.accepts},
                {"trials", r.trials},
                {"frequency", r.frequency},
                {"ci", {r.ci.lo, r.ci.hi}},
                {"exact", r.exact},
                {"decision", r.frequency >= tester.accept_threshold ? "accept" : "reject"},
                {"mode", "mc"}};
    };
  });

  auto* suite = app.add_subcommand("oracle-suite", "run the acceptance criteria");
  suite->add_option("--level", level)->check(CLI::IsMember({"desk", "smoke"}));
  suite->callback([&] {
    action = [&] {
      const std::uint64_t s = g.seed.value_or(20240601);
      std::ostringstream lines;
      const auto res = acceptance::run_all(acceptance::parse_level(level), s, &std::cerr);
      int failed = 0;
      for (const auto& c : res) {
        lines << acceptance::format_line(c) << '\n';
        failed += !c.pass;
      }
      text_result = lines.str();
      exit_code = failed == 0 ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;
  if (budget_opt->count() > 0) set_enumeration_budget(budget_value);
  if (g.threads > 0) set_thread_count(g.threads);

  const auto wall_start = std::chrono::system_clock::now();
  const auto start = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string payload = text_result.empty() ? result.dump(2) + "\n" : text_result;
  if (g.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream o(g.out);
    if (!o) {
      std::cerr << "error: cannot write " << g.out << '\n';
      return 1;
    }
    o << payload;
  }
  if (!g.meta.empty()) {
    const std::time_t ts = std::chrono::system_clock::to_time_t(wall_start);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&ts));
    Json meta = {{"command", app.get_subcommands().front()->get_name()},
                 {"started", buf},
                 {"seconds", secs},
                 {"threads", thread_count()},
                 {"budget", enumeration_budget()}};
    if (g.seed) meta["seed"] = *g.seed;
    std::ofstream m(g.meta);
    m << meta.dump(2) << '\n';
  }
  return exit_code;
}
