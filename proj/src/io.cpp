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


#include "r3/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <json.hpp>
#include <set>
#include <sstream>

#include "r3/r3core.hpp"

namespace r3 {

using nlohmann::json;

std::string read_text_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{} not found: {}", what, path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, target);
}

namespace {

int vertex_ref(const json& v, const std::map<std::string, int>& by_name, int n,
               const std::string& ctx) {
  if (v.is_number_integer()) {
    const int id = v.get<int>();
    if (id < 1 || id > n) throw InputError(fmt::format("{}: vertex {} out of range", ctx, id));
    return id - 1;
  }
  if (v.is_string()) {
    auto it = by_name.find(v.get<std::string>());
    if (it == by_name.end()) {
      throw InputError(fmt::format("{}: unknown vertex '{}'", ctx, v.get<std::string>()));
    }
    return it->second;
  }
  throw InputError(ctx + ": vertex must be a 1-based index or a name");
}

double number(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw InputError(fmt::format("{}: missing numeric field '{}'", ctx, key));
  }
  return obj[key].get<double>();
}

}  // namespace

Topology parse_topology_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("topology is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("links")) {
    throw InputError("topology must have 'vertices' and 'links'");
  }
  std::vector<std::string> names;
  if (doc["vertices"].is_number_integer()) {
    for (int j = 0; j < doc["vertices"].get<int>(); ++j) names.push_back(std::to_string(j + 1));
  } else if (doc["vertices"].is_array()) {
    for (const auto& v : doc["vertices"]) {
      names.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  } else {
    throw InputError("'vertices' must be a list of names or a count");
  }
  const int n = static_cast<int>(names.size());
  std::map<std::string, int> by_name;
  for (int j = 0; j < n; ++j) {
    if (!by_name.emplace(names[j], j).second) {
      throw InputError(fmt::format("duplicate vertex name '{}'", names[j]));
    }
  }
  std::vector<Link> links;
  int idx = 0;
  for (const auto& l : doc["links"]) {
    const std::string ctx = fmt::format("link {}", ++idx);
    if (!l.is_object() || !l.contains("src") || !l.contains("tgt")) {
      throw InputError(ctx + ": needs 'src' and 'tgt'");
    }
    links.push_back(Link{0, vertex_ref(l["src"], by_name, n, ctx),
                         vertex_ref(l["tgt"], by_name, n, ctx),
                         number(l, "capacity_gbps", ctx)});
  }
  std::vector<P2MPGroup> groups;
  std::vector<int> per_vertex(static_cast<std::size_t>(n), 0);
  if (doc.contains("groups")) {
    idx = 0;
    for (const auto& g : doc["groups"]) {
      const std::string ctx = fmt::format("group {}", ++idx);
      if (!g.is_object() || !g.contains("vertex") || !g.contains("members")) {
        throw InputError(ctx + ": needs 'vertex' and 'members'");
      }
      P2MPGroup grp;
      grp.vertex = vertex_ref(g["vertex"], by_name, n, ctx);
      grp.group_id = per_vertex[grp.vertex]++;
      grp.capacity = number(g, "capacity_gbps", ctx);
      if (g.contains("name") && g["name"].is_string()) grp.name = g["name"].get<std::string>();
      for (const auto& m : g["members"]) {
        if (!m.is_number_integer()) throw InputError(ctx + ": members must be link ids");
        grp.members.push_back(m.get<int>() - 1);
      }
      groups.push_back(std::move(grp));
    }
  }
  Topology t = Topology(n, std::move(links), std::move(groups), names).with_singleton_groups();
  const auto issues = validate_topology(t);
  if (!issues.empty()) {
    std::string msg = "invalid topology:";
    for (const auto& s : issues) msg += " " + s + ";";
    throw InputError(msg);
  }
  return t;
}

std::string topology_to_json(const Topology& t) {
  json doc;
  doc["vertices"] = t.vertex_names();
  doc["links"] = json::array();
  for (const Link& l : t.links()) {
    doc["links"].push_back({{"src", l.src + 1}, {"tgt", l.tgt + 1}, {"capacity_gbps", l.capacity}});
  }
  doc["groups"] = json::array();
  for (const auto& g : t.groups()) {
    json members = json::array();
    for (int m : g.members) members.push_back(m + 1);
    json jg = {{"vertex", g.vertex + 1}, {"members", members}, {"capacity_gbps", g.capacity}};
    if (!g.name.empty()) jg["name"] = g.name;
    doc["groups"].push_back(jg);
  }
  return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

DemandMatrix parse_demand_csv(const std::string& text, const Topology& t) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  const int n = t.num_vertices();
  if (static_cast<int>(rows.size()) != n + 1) {
    throw InputError(fmt::format("demand CSV needs a header and {} rows, found {} lines", n,
                                 rows.size()));
  }
  std::vector<int> col_vertex;
  for (const auto& name : rows[0]) {
    auto it = std::find(t.vertex_names().begin(), t.vertex_names().end(), name);
    if (it == t.vertex_names().end()) {
      throw InputError(fmt::format("demand CSV header names unknown vertex '{}'", name));
    }
    col_vertex.push_back(static_cast<int>(it - t.vertex_names().begin()));
  }
  if (static_cast<int>(col_vertex.size()) != n ||
      std::set<int>(col_vertex.begin(), col_vertex.end()).size() != col_vertex.size()) {
    throw InputError("demand CSV header must list every vertex exactly once");
  }
  DemandMatrix d(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (static_cast<int>(row.size()) != n) {
      throw InputError(fmt::format("demand CSV row {} has {} values, expected {}", i + 1,
                                   row.size(), n));
    }
    for (int k = 0; k < n; ++k) {
      try {
        std::size_t used = 0;
        const double v = std::stod(row[k], &used);
        if (used != row[k].size()) throw std::invalid_argument(row[k]);
        d(col_vertex[i], col_vertex[k]) = v;
      } catch (const std::exception&) {
        throw InputError(fmt::format("demand CSV row {} column {}: '{}' is not a number", i + 1,
                                     k + 1, row[k]));
      }
    }
  }
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return d;
}

std::string demand_to_csv(const DemandMatrix& d, const std::vector<std::string>& names) {
  std::string out;
  for (int b = 0; b < d.n; ++b) out += (b ? "," : "") + names.at(b);
  out += "\n";
  for (int a = 0; a < d.n; ++a) {
    for (int b = 0; b < d.n; ++b) out += fmt::format("{}{:.17g}", b ? "," : "", d(a, b));
    out += "\n";
  }
  return out;
}

namespace {

json dense(const std::vector<double>& m, int num) {
  json rows = json::array();
  for (int i = 0; i < num; ++i) {
    rows.push_back(std::vector<double>(m.begin() + static_cast<std::ptrdiff_t>(i) * num,
                                       m.begin() + static_cast<std::ptrdiff_t>(i + 1) * num));
  }
  return rows;
}

std::vector<double> undense(const json& rows, int num, const char* what) {
  std::vector<double> m;
  if (!rows.is_array() || static_cast<int>(rows.size()) != num) {
    throw InputError(fmt::format("solution '{}' must have {} rows", what, num));
  }
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != num) {
      throw InputError(fmt::format("solution '{}' rows must have {} entries", what, num));
    }
    for (const auto& v : row) m.push_back(v.get<double>());
  }
  return m;
}

json solution_json(const R3Solution& sol, const std::vector<double>& r,
                   const std::vector<double>& p) {
  json doc;
  doc["n"] = sol.n;
  doc["num_links"] = sol.num_links;
  doc["F"] = sol.F;
  doc["mu"] = sol.mu;
  doc["effective_mu"] = sol.effective_mu;
  doc["refined"] = sol.refined;
  doc["iterations"] = sol.iterations;
  json rs = json::array();
  const int n = sol.n;
  const int num = sol.num_links;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int l = 0; l < num; ++l) {
        const double v = r[static_cast<std::size_t>((a * n + b) * num + l)];
        if (v != 0.0) rs.push_back({a + 1, b + 1, l + 1, v});
      }
    }
  }
  doc["r"] = rs;
  doc["p"] = dense(p, num);
  doc["pi"] = dense(sol.pi, num);
  doc["lambda"] = sol.lam;
  json ignored = json::array();
  for (int l : sol.ignored_links) ignored.push_back(l + 1);
  doc["ignored_links"] = ignored;
  json excused = json::array();
  for (auto [a, b] : sol.excused_pairs) excused.push_back({a + 1, b + 1});
  doc["excused_pairs"] = excused;
  return doc;
}

}  // namespace

std::string solution_to_json(const R3Solution& sol) {
  return solution_json(sol, sol.r, sol.p).dump(2) + "\n";
}

R3Solution parse_solution_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("solution is not valid JSON: ") + e.what());
  }
  try {
    R3Solution sol;
    sol.n = doc.at("n").get<int>();
    sol.num_links = doc.at("num_links").get<int>();
    sol.F = doc.at("F").get<int>();
    sol.mu = doc.at("mu").get<double>();
    sol.effective_mu = doc.at("effective_mu").get<double>();
    sol.refined = doc.value("refined", false);
    sol.iterations = doc.value("iterations", 0L);
    const int n = sol.n;
    const int num = sol.num_links;
    sol.r.assign(static_cast<std::size_t>(n) * n * num, 0.0);
    for (const auto& e : doc.at("r")) {
      const int a = e.at(0).get<int>() - 1;
      const int b = e.at(1).get<int>() - 1;
      const int l = e.at(2).get<int>() - 1;
      if (a < 0 || a >= n || b < 0 || b >= n || l < 0 || l >= num) {
        throw InputError("solution 'r' entry out of range");
      }
      sol.r[static_cast<std::size_t>((a * n + b) * num + l)] = e.at(3).get<double>();
    }
    sol.p = undense(doc.at("p"), num, "p");
    sol.pi = undense(doc.at("pi"), num, "pi");
    sol.lam = doc.at("lambda").get<std::vector<double>>();
    if (static_cast<int>(sol.lam.size()) != num) throw InputError("solution 'lambda' has wrong size");
    for (const auto& l : doc.at("ignored_links")) sol.ignored_links.push_back(l.get<int>() - 1);
    if (doc.contains("excused_pairs")) {
      for (const auto& e : doc["excused_pairs"]) {
        sol.excused_pairs.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
      }
    }
    return sol;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed solution: ") + e.what());
  }
}

std::string state_to_json(const ReconfigState& state, const R3Solution& original) {
  json doc = solution_json(original, state.r, state.p);
  json failed = json::array();
  for (int l : state.failed) failed.push_back(l + 1);
  doc["failed"] = failed;
  json drops = json::array();
  for (const auto& d : state.drops) {
    json e = {{"link", d.link + 1}, {"a", d.a + 1}, {"b", d.b + 1}, {"amount", d.amount},
              {"reason", to_string(d.reason)}};
    if (d.protection_of >= 0) e["protection_of"] = d.protection_of + 1;
    drops.push_back(e);
  }
  doc["drops"] = drops;
  return doc.dump(2) + "\n";
}

std::vector<int> parse_trace(const std::string& text, int num_links) {
  std::istringstream in(text);
  std::string line;
  std::vector<int> out;
  std::set<int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError(fmt::format("trace line {}: '{}' is not a link id", lineno, tok));
    }
    if (id < 1 || id > num_links) {
      throw InputError(fmt::format("trace line {}: unknown link id {}", lineno, id));
    }
    if (!seen.insert(id).second) {
      throw InputError(fmt::format("trace line {}: link {} repeated", lineno, id));
    }
    out.push_back(id - 1);
  }
  return out;
}

std::string link_utilization_csv(const Topology& t, const LinkLoadReport& loads) {
  std::string out = "link,src,tgt,capacity_gbps,load_gbps,utilization\n";
  for (const Link& l : t.links()) {
    out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", l.id + 1, t.vertex_names()[l.src],
                       t.vertex_names()[l.tgt], l.capacity, loads.load[l.id],
                       loads.utilization[l.id]);
  }
  return out;
}

std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars,
                          double reference) {
  const int bar_w = 36;
  const int gap = 8;
  const int left = 50;
  const int top = 40;
  const int height = 240;
  const int width = left + static_cast<int>(bars.size()) * (bar_w + gap) + 20;
  double vmax = reference;
  for (const auto& b : bars) vmax = std::max(vmax, b.value);
  vmax *= 1.1;
  auto y_of = [&](double v) { return top + height - v / vmax * height; };
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      std::max(width, 240), top + height + 60);
  s += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\">{}</text>\n", left, title);
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left,
                   top + height, width - 10, top + height);
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left, top,
                   left, top + height);
  for (int k = 0; k <= 4; ++k) {
    const double v = vmax * k / 4.0;
    s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n", left - 4,
                     y_of(v) + 4, v);
  }
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = left + gap + static_cast<double>(i) * (bar_w + gap);
    const double y = y_of(bars[i].value);
    s += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{}\" height=\"{:.1f}\" fill=\"{}\"/>\n", x, y,
        bar_w, top + height - y, bars[i].value > reference ? "#c0392b" : "#2e86c1");
    s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     x + bar_w / 2.0, top + height + 14, bars[i].label);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                     x + bar_w / 2.0, y - 3, bars[i].value);
  }
  s += fmt::format(
      "<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"gray\" "
      "stroke-dasharray=\"4 3\"/>\n",
      left, y_of(reference), width - 10, y_of(reference));
  s += "</svg>\n";
  return s;
}

}  // namespace r3
