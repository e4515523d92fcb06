// Copyright 2026 The r3 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "r3/analysis.hpp"
#include "r3/demand.hpp"
#include "r3/io.hpp"
#include "r3/r3core.hpp"
#include "r3/reconfig.hpp"

namespace r3::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void validate(const RunConfig& c) {
  if (c.topology.empty()) throw InputError("no topology given");
  if (!(c.D > 0.0) || !std::isfinite(c.D)) throw InputError(fmt::format("D must be positive, got {}", c.D));
  if (!(c.damping > 0.0 && c.damping < 1.0)) {
    throw InputError(fmt::format("damping must lie in (0, 1), got {}", c.damping));
  }
  if (c.F < 0) throw InputError(fmt::format("F must be nonnegative, got {}", c.F));
  if (c.mode != "full" && c.mode != "relaxed") {
    throw InputError(fmt::format("mode must be 'full' or 'relaxed', got '{}'", c.mode));
  }
  for (double d : c.sweep_D) {
    if (!(d > 0.0) || !std::isfinite(d)) throw InputError(fmt::format("sweep D values must be positive, got {}", d));
  }
  for (int f : c.sweep_F) {
    if (f < 0) throw InputError(fmt::format("sweep F values must be nonnegative, got {}", f));
  }
  if (c.top_k < 1) throw InputError("top_k must be at least 1");
  if (c.sampled < 0) throw InputError("sampled must be nonnegative");
}

void apply_json_config(RunConfig& c, const std::string& text, const std::vector<std::string>& skip) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  auto wanted = [&](const char* key) {
    return doc.contains(key) && std::find(skip.begin(), skip.end(), key) == skip.end();
  };
  try {
    if (wanted("topology")) c.topology = doc["topology"].get<std::string>();
    if (wanted("demand")) c.demand = doc["demand"].get<std::string>();
    if (wanted("D")) c.D = doc["D"].get<double>();
    if (wanted("damping")) c.damping = doc["damping"].get<double>();
    if (wanted("F")) c.F = doc["F"].get<int>();
    if (wanted("wireless")) c.wireless = doc["wireless"].get<bool>();
    if (wanted("mode")) c.mode = doc["mode"].get<std::string>();
    if (wanted("excuse_unreachable")) c.excuse_unreachable = doc["excuse_unreachable"].get<bool>();
    if (wanted("sweep_D")) c.sweep_D = doc["sweep_D"].get<std::vector<double>>();
    if (wanted("sweep_F")) c.sweep_F = doc["sweep_F"].get<std::vector<int>>();
    if (wanted("top_k")) c.top_k = doc["top_k"].get<int>();
    if (wanted("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
    if (wanted("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (wanted("solution")) c.solution = doc["solution"].get<std::string>();
    if (wanted("trace")) c.trace = doc["trace"].get<std::string>();
    if (wanted("exhaustive")) c.exhaustive = doc["exhaustive"].get<int>();
    if (wanted("sampled")) c.sampled = doc["sampled"].get<int>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config field has the wrong type: ") + e.what());
  }
}

namespace {

struct Loaded {
  R3Instance inst;
  DemandMatrix derived_demand;
};

Loaded load_instance(const RunConfig& c, double D, int F) {
  Loaded out;
  const Topology base = parse_topology_json(read_text_file(c.topology, "topology"));
  DemandMatrix d;
  if (!c.demand.empty()) {
    d = parse_demand_csv(read_text_file(c.demand, "demand"), base);
  } else {
    DemandModel model;
    model.D = D;
    model.damping = c.damping;
    d = build_demand(base, model);
  }
  out.inst.vt = virtualize(base);
  out.inst.demand = d;
  out.inst.F = F;
  out.inst.wireless = c.wireless;
  out.inst.routing.mode = c.mode == "relaxed" ? ConstraintMode::kRelaxed : ConstraintMode::kFull;
  out.derived_demand = derived_demand(out.inst.vt, d);
  return out;
}

R3Options solve_options(const RunConfig& c) {
  R3Options o;
  o.excuse_unreachable = c.excuse_unreachable;
  return o;
}

R3Solution load_solution(const RunConfig& c, const Topology& derived) {
  if (c.solution.empty()) throw InputError("no solution given");
  R3Solution sol = parse_solution_json(read_text_file(c.solution, "solution"));
  if (sol.n != derived.num_vertices() || sol.num_links != derived.num_links()) {
    throw InputError(fmt::format(
        "solution is for {} vertices and {} links, topology derives {} and {}", sol.n,
        sol.num_links, derived.num_vertices(), derived.num_links()));
  }
  return sol;
}

std::string out_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.output_dir) / name).string();
}

void ensure_output_dir(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw InputError(fmt::format("cannot create output directory {}: {}", c.output_dir, ec.message()));
}

json pair_names(const std::vector<std::pair<int, int>>& pairs, const Topology& derived) {
  json out = json::array();
  for (auto [a, b] : pairs) {
    out.push_back({{"a", a + 1}, {"b", b + 1},
                   {"a_name", derived.vertex_names().at(a)},
                   {"b_name", derived.vertex_names().at(b)}});
  }
  return out;
}

int report_error(std::ostream& err, int code, const std::string& message, json extra = json::object()) {
  json doc = {{"error", message}, {"exit_code", code}};
  for (auto& [k, v] : extra.items()) doc[k] = v;
  err << doc.dump() << "\n";
  return code;
}

// Maps library exceptions onto the exit-code contract. The derived topology
// is needed to name unreachable pairs; the body copies it out once known,
// since its own locals are gone by the time the handler runs.
int guarded(std::ostream& err, const std::function<int(Topology*)>& body) {
  Topology derived;
  try {
    return body(&derived);
  } catch (const InputError& e) {
    return report_error(err, kInputError, e.what());
  } catch (const R3Infeasible& e) {
    json extra = json::object();
    if (derived.num_vertices() > 0) extra["unreachable_pairs"] = pair_names(e.unreachable_pairs, derived);
    return report_error(err, kInfeasible, e.what(), extra);
  } catch (const std::invalid_argument& e) {
    return report_error(err, kInputError, e.what());
  } catch (const std::out_of_range& e) {
    return report_error(err, kInputError, e.what());
  } catch (const std::domain_error& e) {
    return report_error(err, kInputError, e.what());
  } catch (const std::exception& e) {
    return report_error(err, kInternal, e.what());
  }
}

std::string utilization_csv(const Loaded& ld, const R3Solution& sol) {
  const Topology& t = ld.inst.vt.derived;
  const auto load = routing_loads(t, ld.derived_demand, sol.r);
  const auto worst = worst_case_utilization(sol, t, ld.derived_demand, true);
  std::vector<char> ignored(static_cast<std::size_t>(t.num_links()), 0);
  for (int l : sol.ignored_links) ignored[l] = 1;
  std::string out = "link,origin,src,tgt,capacity_gbps,load_gbps,utilization,worst_utilization,ignored\n";
  for (const Link& l : t.links()) {
    out += fmt::format("{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", l.id + 1,
                       ld.inst.vt.origin[l.id] + 1, t.vertex_names()[l.src],
                       t.vertex_names()[l.tgt], l.capacity, load[l.id], load[l.id] / l.capacity,
                       worst[l.id], ignored[l.id] ? 1 : 0);
  }
  return out;
}

// Worst-case utilization per original link: the larger of its halves.
std::vector<double> per_original(const VirtualizedTopology& vt, const std::vector<double>& derived) {
  std::vector<double> out(static_cast<std::size_t>(vt.base.num_links()), 0.0);
  for (std::size_t l = 0; l < derived.size(); ++l) {
    out[vt.origin[l]] = std::max(out[vt.origin[l]], derived[l]);
  }
  return out;
}

}  // namespace

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology* derived) {
    validate(c);
    const Loaded ld = load_instance(c, c.D, c.F);
    *derived = ld.inst.vt.derived;
    ensure_output_dir(c);
    const R3Solution sol = solve_r3(ld.inst, solve_options(c));
    write_text_file(out_path(c, "solution.json"), solution_to_json(sol));
    write_text_file(out_path(c, "link_utilization.csv"), utilization_csv(ld, sol));
    json ignored = json::array();
    for (int l : sol.ignored_links) ignored.push_back(l + 1);
    const json summary = {{"status", "optimal"},       {"mu", sol.mu},
                          {"effective_mu", sol.effective_mu}, {"F", sol.F},
                          {"n", sol.n},                {"num_links", sol.num_links},
                          {"iterations", sol.iterations}, {"ignored_links", ignored},
                          {"excused_pairs", pair_names(sol.excused_pairs, ld.inst.vt.derived)}};
    write_text_file(out_path(c, "summary.json"), summary.dump(2) + "\n");
    out << fmt::format("mu = {:.9g}  effective_mu = {:.9g}  ({} simplex iterations)\n", sol.mu,
                       sol.effective_mu, sol.iterations);
    return static_cast<int>(kOk);
  });
}

int cmd_reconfigure(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology* derived) {
    validate(c);
    const Loaded ld = load_instance(c, c.D, c.F);
    const VirtualizedTopology& vt = ld.inst.vt;
    *derived = vt.derived;
    const R3Solution sol = load_solution(c, vt.derived);
    if (c.trace.empty()) throw InputError("no trace given");
    const std::vector<int> trace = parse_trace(read_text_file(c.trace, "trace"), vt.base.num_links());
    ensure_output_dir(c);

    ReconfigState state = ReconfigState::from_solution(
        sol, std::make_shared<const Topology>(vt.derived),
        std::make_shared<const DemandMatrix>(ld.derived_demand));
    std::string events = "step,failed_link,link,origin,load_gbps,utilization\n";
    auto record = [&](int step, int failed) {
      const LinkLoadReport rep = link_loads(state);
      for (const Link& l : vt.derived.links()) {
        events += fmt::format("{},{},{},{},{:.17g},{:.17g}\n", step, failed < 0 ? 0 : failed + 1,
                              l.id + 1, vt.origin[l.id] + 1, rep.load[l.id], rep.utilization[l.id]);
      }
      return rep;
    };
    LinkLoadReport rep = record(0, -1);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const LinkHalves& h = vt.half_map[trace[k]];
      apply_failure_in_place(state, h.first);
      if (h.second) apply_failure_in_place(state, *h.second);
      rep = record(static_cast<int>(k) + 1, trace[k]);
    }
    write_text_file(out_path(c, "state.json"), state_to_json(state, sol));
    write_text_file(out_path(c, "events.csv"), events);
    write_text_file(out_path(c, "link_utilization.csv"), link_utilization_csv(vt.derived, rep));
    out << fmt::format("{} failures applied, max utilization {:.9g}, {} drop events\n",
                       trace.size(), rep.max_utilization, state.drops.size());
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology* derived) {
    validate(c);
    Loaded ld = load_instance(c, c.D, c.F);
    *derived = ld.inst.vt.derived;
    const R3Solution sol = load_solution(c, ld.inst.vt.derived);
    ld.inst.F = sol.F;
    ensure_output_dir(c);
    VerificationOptions vo;
    vo.exhaustive_up_to = c.exhaustive < 0 ? sol.F : c.exhaustive;
    vo.sampled = c.sampled;
    vo.seed = c.seed;
    const VerificationReport rep = verify_congestion_free(sol, ld.inst, vo);

    json violations = json::array();
    for (const auto& v : rep.violations) {
      json failures = json::array();
      json origins = json::array();
      for (int l : v.failures) {
        failures.push_back(l + 1);
        origins.push_back(ld.inst.vt.origin[l] + 1);
      }
      json e = {{"kind", v.kind}, {"failures", failures}, {"failed_origins", origins},
                {"value", v.value}};
      if (v.link >= 0) e["link"] = v.link + 1;
      if (v.a >= 0) e["a"] = v.a + 1;
      if (v.b >= 0) e["b"] = v.b + 1;
      violations.push_back(e);
    }
    const json doc = {{"passed", rep.passed()},
                      {"scenarios", rep.scenarios},
                      {"expected_exhaustive", rep.expected_exhaustive},
                      {"worst_utilization", rep.worst_utilization},
                      {"excused_drops", rep.excused_drops},
                      {"order_invariant", rep.order_invariant},
                      {"max_order_deviation", rep.max_order_deviation},
                      {"max_order_deviation_with_drops", rep.max_order_deviation_with_drops},
                      {"violations", violations}};
    write_text_file(out_path(c, "verification.json"), doc.dump(2) + "\n");
    if (rep.passed()) {
      out << fmt::format("pass: {} scenarios, no violations\n", rep.scenarios);
      return static_cast<int>(kOk);
    }
    const auto& first = rep.violations.front();
    std::string scen;
    for (int l : first.failures) scen += fmt::format("{}{}", scen.empty() ? "" : ",", l + 1);
    out << fmt::format("fail: {} violations in {} scenarios; first: {} after failing links [{}]\n",
                       rep.violations.size(), rep.scenarios, first.kind, scen);
    return static_cast<int>(kVerificationFailed);
  });
}

namespace {

std::string fmt_double(double v) { return fmt::format("{}", v); }

SweepPoint solve_point(const RunConfig& c, double D, int F) {
  SweepPoint pt;
  pt.D = D;
  pt.F = F;
  try {
    const Loaded ld = load_instance(c, D, F);
    const R3Solution sol = solve_r3(ld.inst, solve_options(c));
    pt.status = "optimal";
    pt.mu = sol.mu;
    pt.effective_mu = sol.effective_mu;
    const auto util = per_original(
        ld.inst.vt, worst_case_utilization(sol, ld.inst.vt.derived, ld.derived_demand, true,
                                           ExecPolicy::kSerial));
    std::vector<int> order(util.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return util[x] > util[y]; });
    const std::size_t k = std::min(order.size(), static_cast<std::size_t>(c.top_k));
    for (std::size_t i = 0; i < k; ++i) pt.top.emplace_back(order[i], util[order[i]]);
    // Unique argmax only; a tie is reported as -1.
    if (!order.empty()) {
      pt.argmax_link = order[0];
      if (order.size() > 1 && util[order[1]] >= util[order[0]] - 1e-12) pt.argmax_link = -1;
    }
    const json point = {{"D", D}, {"F", F}, {"solution", json::parse(solution_to_json(sol))}};
    write_text_file(out_path(c, fmt::format("points/D{}_F{}.json", fmt_double(D), F)),
                    point.dump() + "\n");
  } catch (const R3Infeasible&) {
    pt.status = "infeasible";
  } catch (const std::exception&) {
    pt.status = "error";
  }
  return pt;
}

}  // namespace

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology*) {
    validate(c);
    const std::vector<double> Ds = c.sweep_D.empty() ? std::vector<double>{c.D} : c.sweep_D;
    const std::vector<int> Fs = c.sweep_F.empty() ? std::vector<int>{c.F} : c.sweep_F;
    // Parse once up front so input errors abort before any point runs.
    (void)load_instance(c, Ds.front(), Fs.front());
    ensure_output_dir(c);
    std::error_code ec;
    fs::create_directories(fs::path(c.output_dir) / "points", ec);

    const int total = static_cast<int>(Ds.size() * Fs.size());
    std::vector<SweepPoint> points(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < total; ++i) {
      const std::size_t di = static_cast<std::size_t>(i) / Fs.size();
      const std::size_t fi = static_cast<std::size_t>(i) % Fs.size();
      points[i] = solve_point(c, Ds[di], Fs[fi]);
    }

    std::string csv = "D,F,status,mu,effective_mu,argmax_link,top\n";
    for (const auto& pt : points) {
      std::string top;
      for (auto [l, u] : pt.top) top += fmt::format("{}{}:{}", top.empty() ? "" : ";", l + 1, u);
      csv += fmt::format("{},{},{},{},{},{},{}\n", fmt_double(pt.D), pt.F, pt.status,
                         fmt_double(pt.mu), fmt_double(pt.effective_mu), pt.argmax_link + 1, top);
    }
    write_text_file(out_path(c, "sweep.csv"), csv);
    for (std::size_t di = 0; di < Ds.size(); ++di) {
      std::vector<Bar> bars;
      for (std::size_t fi = 0; fi < Fs.size(); ++fi) {
        for (auto [l, u] : points[di * Fs.size() + fi].top) {
          bars.push_back({fmt::format("F{} L{}", Fs[fi], l + 1), u});
        }
      }
      write_text_file(out_path(c, fmt::format("sweep_D{}.svg", di + 1)),
                      bar_chart_svg(fmt::format("Top link utilizations, D = {:g}", Ds[di]), bars));
    }
    int failed = 0;
    for (const auto& pt : points) failed += pt.status != "optimal";
    out << fmt::format("{} sweep points, {} failed\n", total, failed);
    return static_cast<int>(kOk);
  });
}

int cmd_demand(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology*) {
    validate(c);
    const Topology base = parse_topology_json(read_text_file(c.topology, "topology"));
    DemandModel model;
    model.D = c.D;
    model.damping = c.damping;
    const DemandMatrix d = build_demand(base, model);
    const std::vector<double> rank = pagerank(base, model);
    ensure_output_dir(c);
    write_text_file(out_path(c, "demand.csv"), demand_to_csv(d, base.vertex_names()));
    std::string pr = "vertex,pagerank\n";
    for (int j = 0; j < base.num_vertices(); ++j) {
      pr += fmt::format("{},{:.17g}\n", base.vertex_names()[j], rank[j]);
    }
    write_text_file(out_path(c, "pagerank.csv"), pr);
    double total = 0.0;
    for (double v : d.values) total += v;
    out << fmt::format("demand for {} vertices, total {:.9g} Gbps\n", base.num_vertices(), total);
    return static_cast<int>(kOk);
  });
}

int cmd_maxload(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&](Topology* derived) {
    validate(c);
    const Loaded ld = load_instance(c, c.D, c.F);
    *derived = ld.inst.vt.derived;
    const R3Solution sol = load_solution(c, ld.inst.vt.derived);
    ensure_output_dir(c);
    const auto plain = max_load_report(sol, ld.inst.vt.derived, false);
    const auto carved = max_load_report(sol, ld.inst.vt.derived, true);
    std::string csv = "link,origin,greedy,lp,dual,greedy_carve_out\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < plain.size(); ++i) {
      const auto& e = plain[i];
      worst = std::max(worst, std::abs(e.greedy - e.lp));
      csv += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", e.link + 1,
                         ld.inst.vt.origin[e.link] + 1, e.greedy, e.lp, e.dual, carved[i].greedy);
    }
    write_text_file(out_path(c, "maxload.csv"), csv);
    out << fmt::format("{} links, max |greedy - lp| = {:.3g}\n", plain.size(), worst);
    return static_cast<int>(kOk);
  });
}

std::vector<SweepPoint> read_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<SweepPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() < 6) throw InputError("sweep.csv: short row");
    SweepPoint pt;
    pt.D = std::stod(f[0]);
    pt.F = std::stoi(f[1]);
    pt.status = f[2];
    pt.mu = std::stod(f[3]);
    pt.effective_mu = std::stod(f[4]);
    pt.argmax_link = std::stoi(f[5]) - 1;
    if (f.size() > 6) {
      std::stringstream ts(f[6]);
      std::string item;
      while (std::getline(ts, item, ';')) {
        const auto colon = item.find(':');
        pt.top.emplace_back(std::stoi(item.substr(0, colon)) - 1, std::stod(item.substr(colon + 1)));
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace r3::cli
