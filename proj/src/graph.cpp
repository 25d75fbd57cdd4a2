#include "pco/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "pco/random.hpp"

namespace pco {

DirectedGraph::DirectedGraph(std::size_t node_count)
    : in_(node_count), out_(node_count) {}

DirectedGraph DirectedGraph::from_in_neighbors(
    const std::vector<std::vector<NodeId>>& in_neighbors) {
  DirectedGraph g(in_neighbors.size());
  for (NodeId i = 0; i < in_neighbors.size(); ++i) {
    for (NodeId j : in_neighbors[i]) g.add_edge(i, j);
  }
  return g;
}

void DirectedGraph::check_node(NodeId i) const {
  if (i >= in_.size()) {
    throw GraphError("node id " + std::to_string(i) + " out of range (N=" +
                     std::to_string(in_.size()) + ")");
  }
}

void DirectedGraph::add_edge(NodeId receiver, NodeId source) {
  check_node(receiver);
  check_node(source);
  if (receiver == source) {
    throw GraphError("self-loop on node " + std::to_string(receiver));
  }
  auto& in = in_[receiver];
  auto pos = std::lower_bound(in.begin(), in.end(), source);
  if (pos != in.end() && *pos == source) {
    throw GraphError("duplicate edge " + std::to_string(receiver) + " <- " +
                     std::to_string(source));
  }
  in.insert(pos, source);
  auto& out = out_[source];
  out.insert(std::lower_bound(out.begin(), out.end(), receiver), receiver);
}

std::size_t DirectedGraph::edge_count() const noexcept {
  std::size_t m = 0;
  for (const auto& in : in_) m += in.size();
  return m;
}

bool DirectedGraph::has_edge(NodeId receiver, NodeId source) const {
  check_node(receiver);
  return std::binary_search(in_[receiver].begin(), in_[receiver].end(), source);
}

std::span<const NodeId> DirectedGraph::in_neighbors(NodeId i) const {
  check_node(i);
  return in_[i];
}

std::span<const NodeId> DirectedGraph::out_neighbors(NodeId i) const {
  check_node(i);
  return out_[i];
}

std::size_t DirectedGraph::in_slot(NodeId receiver, NodeId source) const {
  check_node(receiver);
  const auto& in = in_[receiver];
  auto pos = std::lower_bound(in.begin(), in.end(), source);
  if (pos == in.end() || *pos != source) {
    throw GraphError("no edge " + std::to_string(receiver) + " <- " +
                     std::to_string(source));
  }
  return static_cast<std::size_t>(pos - in.begin());
}

std::size_t in_degree(const DirectedGraph& g, NodeId i) {
  return g.in_neighbors(i).size();
}

bool is_r_robust(const DirectedGraph& g, std::size_t r, std::size_t guard) {
  const std::size_t n = g.node_count();
  if (r == 0) throw GraphError("robustness parameter r must be positive");
  if (n < 2) throw GraphError("robustness is defined only for N >= 2");
  if (n > guard || n > 40) {
    throw GraphError("graph with N=" + std::to_string(n) +
                     " is too large for exhaustive check (guard " +
                     std::to_string(guard) + ")");
  }

  std::vector<std::uint64_t> in_mask(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.in_neighbors(i)) in_mask[i] |= std::uint64_t{1} << j;
  }

  auto has_witness = [&](std::uint64_t subset) {
    for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(rest));
      if (static_cast<std::size_t>(std::popcount(in_mask[i] & ~subset)) >= r) {
        return true;
      }
    }
    return false;
  };

  // Ternary odometer over (neither=0, V1=1, V2=2) assignments.
  std::vector<std::uint8_t> assign(n, 0);
  std::array<std::uint64_t, 3> sets{};
  sets[0] = (n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  while (true) {
    std::size_t p = 0;
    for (; p < n; ++p) {
      const std::uint64_t bit = std::uint64_t{1} << p;
      sets[assign[p]] &= ~bit;
      if (assign[p] < 2) {
        ++assign[p];
        sets[assign[p]] |= bit;
        break;
      }
      assign[p] = 0;
      sets[0] |= bit;
    }
    if (p == n) break;

    const std::uint64_t v1 = sets[1];
    const std::uint64_t v2 = sets[2];
    if (v1 == 0 || v2 == 0) continue;
    // (V1, V2) and (V2, V1) are the same pair; keep the one where the lowest
    // assigned node sits in V1.
    const std::uint64_t both = v1 | v2;
    if ((both & (~both + 1) & v1) == 0) continue;
    if (!has_witness(v1) && !has_witness(v2)) return false;
  }
  return true;
}

std::size_t max_robustness(const DirectedGraph& g, std::size_t guard) {
  std::size_t r = 0;
  while (r < g.node_count() && is_r_robust(g, r + 1, guard)) ++r;
  return r;
}

DirectedGraph random_digraph(std::size_t n, double edge_probability,
                             std::uint64_t seed) {
  if (n < 2) throw GraphError("random_digraph needs n >= 2");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw GraphError("edge probability must lie in [0, 1]");
  }
  Rng rng(seed);
  DirectedGraph g(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      if (unit_double(rng) < edge_probability) g.add_edge(i, j);
    }
  }
  return g;
}

DirectedGraph complete_digraph(std::size_t n) {
  DirectedGraph g(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j) g.add_edge(i, j);
    }
  }
  return g;
}

DirectedGraph directed_ring(std::size_t n) {
  if (n < 2) throw GraphError("directed_ring needs n >= 2");
  DirectedGraph g(n);
  for (NodeId i = 0; i < n; ++i) g.add_edge((i + 1) % n, i);
  return g;
}

DirectedGraph demo_graph() {
  return DirectedGraph::from_in_neighbors({
      {2, 3, 5, 6},
      {2, 3, 5, 6},
      {0, 1, 6, 7},
      {0, 1, 4, 7},
      {3, 5, 7},
      {0, 1, 4, 6, 7},
      {0, 1, 2, 5, 7},
      {2, 3, 4, 5, 6},
  });
}

namespace {

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

long long parse_id(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v < 0) {
    throw GraphError("line " + std::to_string(line_no) + ": bad node id '" +
                     tok + "'");
  }
  return v;
}

}  // namespace

DirectedGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<DirectedGraph> g;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream ls(line);
    if (!g) {
      std::string tok, extra;
      ls >> tok;
      if (ls >> extra) {
        throw GraphError("line " + std::to_string(line_no) +
                         ": expected node count");
      }
      auto n = parse_id(tok, line_no);
      if (n == 0) throw GraphError("graph must have at least one node");
      g.emplace(static_cast<std::size_t>(n));
      continue;
    }
    std::string head, arrow;
    ls >> head >> arrow;
    if (arrow != "<-") {
      throw GraphError("line " + std::to_string(line_no) +
                       ": expected 'i <- j1 j2 ...'");
    }
    const auto receiver = static_cast<NodeId>(parse_id(head, line_no));
    std::string tok;
    while (ls >> tok) {
      try {
        g->add_edge(receiver, static_cast<NodeId>(parse_id(tok, line_no)));
      } catch (const GraphError& e) {
        throw GraphError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  if (!g) throw GraphError("empty graph description");
  return *std::move(g);
}

std::string format_graph(const DirectedGraph& g) {
  std::ostringstream out;
  out << g.node_count() << '\n';
  for (NodeId i = 0; i < g.node_count(); ++i) {
    out << i << " <-";
    for (NodeId j : g.in_neighbors(i)) out << ' ' << j;
    out << '\n';
  }
  return out.str();
}

DirectedGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace pco
