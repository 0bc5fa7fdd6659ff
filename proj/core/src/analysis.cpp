#include "forge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

IntersectionData intersection_data(const AssembledSurface& x) {
    const CurveSystem& cs = x.curves();
    IntersectionData out;
    out.red_count = static_cast<int>(cs.red_curves.size());
    out.blue_count = static_cast<int>(cs.blue_curves.size());
    out.matrix.assign(out.red_count, std::vector<int>(out.blue_count, 0));

    const int twoq = x.slots_per_tile();
    for (int pt = 0; pt < x.corner_point_count(); ++pt) {
        int c = x.corner_point_members(pt)[0];
        int tile = c / twoq, k = c % twoq;
        int blue_side = tile * twoq + ((k % 2 == 0) ? k : (k - 1 + twoq) % twoq);
        int red_side = tile * twoq + ((k % 2 == 0) ? (k + twoq - 1) % twoq : k);
        int red_curve = x.curve_of_x_side(x.x_side_of_instance(red_side));
        int blue_curve = x.curve_of_x_side(x.x_side_of_instance(blue_side));
        if (out.matrix[red_curve][blue_curve] != 0)
            fail("MultipleIntersection",
                 "red curve " + std::to_string(red_curve) + " and blue curve " +
                     std::to_string(blue_curve) + " cross more than once");
        out.matrix[red_curve][blue_curve] = 1;
    }

    // Intersection graph: vertices are curves, red first; one edge per
    // crossing.
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int r = 0; r < out.red_count; ++r)
        for (int b = 0; b < out.blue_count; ++b)
            if (out.matrix[r][b]) edges.push_back({r, out.red_count + b});
    out.intersection_graph = graph_from_edge_list(out.red_count + out.blue_count, edges);
    return out;
}

IntMatrix dtilde(const IntersectionData& d) {
    const int n = d.red_count + d.blue_count;
    IntMatrix m(n, std::vector<BigInt>(n, 0));
    for (int r = 0; r < d.red_count; ++r)
        for (int b = 0; b < d.blue_count; ++b) {
            m[r][d.red_count + b] = d.matrix[r][b];
            m[d.red_count + b][r] = d.matrix[r][b];
        }
    return m;
}

BigInt exact_determinant(IntMatrix m) {
    const int n = static_cast<int>(m.size());
    for (const auto& row : m)
        require(static_cast<int>(row.size()) == n, "DomainError", "determinant needs a square matrix");
    if (n == 0) return 1;

    // Bareiss fraction-free elimination; every intermediate entry is a
    // minor of the input, all divisions exact.
    BigInt sign = 1, prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

int exact_rank(IntMatrix m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    BigInt prev = 1;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int pivot = -1;
        for (int i = row; i < rows; ++i)
            if (m[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[row], m[pivot]);
        for (int i = row + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                m[i][j] = (m[i][j] * m[row][col] - m[i][col] * m[row][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[row][col];
        ++rank;
        ++row;
    }
    return rank;
}

namespace {

// DFS over elementary spanning subgraphs: repeatedly cover the lowest
// uncovered vertex by either an edge to an uncovered neighbor or a cycle
// through uncovered vertices. Each undirected cycle contributes weight 2.
void harary_rec(const std::vector<std::vector<int>>& adj, std::vector<char>& covered, int n,
                int even_components, long long cycles, BigInt& acc) {
    int v = -1;
    for (int i = 0; i < n; ++i)
        if (!covered[i]) {
            v = i;
            break;
        }
    if (v < 0) {
        BigInt term = 1;
        for (long long c = 0; c < cycles; ++c) term *= 2;
        if (even_components % 2 == 1) term = -term;
        acc += term;
        return;
    }
    covered[v] = 1;
    // Single-edge component {v, w}.
    for (int w : adj[v]) {
        if (covered[w]) continue;
        covered[w] = 1;
        harary_rec(adj, covered, n, even_components + 1, cycles, acc);
        covered[w] = 0;
    }
    // Cycle through v: enumerate paths v -> ... -> w with an edge back to
    // v; fix the orientation by requiring the second vertex to be smaller
    // than the last.
    std::vector<int> path{v};
    auto dfs = [&](auto&& self, int at) -> void {
        for (int w : adj[at]) {
            if (w == v) {
                if (path.size() >= 3 && path[1] < path.back()) {
                    int len = static_cast<int>(path.size());
                    harary_rec(adj, covered, n, even_components + (len % 2 == 0 ? 1 : 0),
                               cycles + 1, acc);
                }
                continue;
            }
            if (covered[w]) continue;
            covered[w] = 1;
            path.push_back(w);
            self(self, w);
            path.pop_back();
            covered[w] = 0;
        }
    };
    dfs(dfs, v);
    covered[v] = 0;
}

} // namespace

BigInt harary_determinant(const HalfEdgeGraph& g) {
    const int n = g.vertex_count();
    require(n <= 16, "TooLarge", "the subgraph-expansion oracle caps at 16 vertices");
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex u = g.tail(d1), v = g.tail(d2);
        require(u != v, "DomainError", "adjacency determinant expects a simple graph");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        require(std::adjacent_find(row.begin(), row.end()) == row.end(), "DomainError",
                "adjacency determinant expects a simple graph");
    }
    BigInt acc = 0;
    std::vector<char> covered(n, 0);
    harary_rec(adj, covered, n, 0, 0, acc);
    return acc;
}

long long perfect_matching_count(const HalfEdgeGraph& g) {
    const int n = g.vertex_count();
    require(n <= 24, "TooLarge", "matching enumeration caps at 24 vertices");
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        adj[g.tail(d1)].push_back(g.tail(d2));
        adj[g.tail(d2)].push_back(g.tail(d1));
    }
    long long count = 0;
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self) -> void {
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i]) {
                v = i;
                break;
            }
        if (v < 0) {
            ++count;
            return;
        }
        used[v] = 1;
        for (int w : adj[v])
            if (!used[w]) {
                used[w] = 1;
                self(self);
                used[w] = 0;
            }
        used[v] = 0;
    };
    rec(rec);
    return count;
}

std::vector<std::vector<double>> twist_matrix(const IntersectionData& d, double theta) {
    require(theta > 0 && theta < kPi, "DomainError", "theta must lie in (0, pi)");
    const int n = d.red_count + d.blue_count;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    double c = std::cos(theta);
    for (int r = 0; r < d.red_count; ++r)
        for (int b = 0; b < d.blue_count; ++b) {
            m[r][d.red_count + b] = c * d.matrix[r][b];
            m[d.red_count + b][r] = -c * d.matrix[r][b];
        }
    return m;
}

CriticalityReport criticality_report(const AssembledSurface& x, double theta) {
    IntersectionData d = intersection_data(x);
    CriticalityReport rep;
    rep.systole_count = systole_count(x);
    IntMatrix dt = dtilde(d);
    rep.det_dtilde = exact_determinant(dt);
    rep.rank_dtilde = exact_rank(dtilde(d));
    rep.theta_dependence =
        "twist matrix = cos(theta) * (0 A; -A^T 0); rank independent of theta away from pi/2";
    rep.index_upper_bound = rep.systole_count;
    bool theta_generic = std::abs(theta - kPi / 2) > 1e-12;
    if (rep.det_dtilde != 0 && theta_generic) {
        int g = genus(x);
        rep.codimension_bound = rep.systole_count - 1;
        rep.dimension_lower_bound = 6 * g - 6 - (rep.systole_count - 1);
    }
    return rep;
}

std::string CriticalityReport::to_json() const {
    nlohmann::ordered_json j;
    j["systole_count"] = systole_count;
    j["det_dtilde"] = det_dtilde.str();
    j["rank_dtilde"] = rank_dtilde;
    j["theta_dependence"] = theta_dependence;
    j["index_upper_bound"] = index_upper_bound;
    if (codimension_bound) j["codimension_bound"] = *codimension_bound;
    if (dimension_lower_bound) j["dimension_lower_bound"] = *dimension_lower_bound;
    return j.dump(2);
}

namespace {

bool induces_tree(const IntersectionData& d, const std::vector<int>& vertices) {
    const int n = static_cast<int>(vertices.size());
    if (n == 0) return false;
    std::map<int, int> index;
    for (int i = 0; i < n; ++i) index[vertices[i]] = i;
    int edges = 0;
    std::vector<std::vector<int>> adj(n);
    for (int r = 0; r < d.red_count; ++r)
        for (int b = 0; b < d.blue_count; ++b) {
            if (!d.matrix[r][b]) continue;
            auto ir = index.find(r), ib = index.find(d.red_count + b);
            if (ir == index.end() || ib == index.end()) continue;
            ++edges;
            adj[ir->second].push_back(ib->second);
            adj[ib->second].push_back(ir->second);
        }
    if (edges != n - 1) return false;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == n;
}

} // namespace

std::optional<std::vector<int>> tree_subset_search(
    const IntersectionData& d, const std::function<bool(const std::vector<int>&)>& fills) {
    const int n = d.red_count + d.blue_count;
    require(n <= 24, "TooLarge", "subset search caps at 24 curves");
    for (int size = 2; size <= n; size += 2) {
        // Lexicographic enumeration of size-subsets.
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            if (induces_tree(d, idx) && fills(idx)) return idx;
            int i = size - 1;
            while (i >= 0 && idx[i] == n - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<CurveRef>> tree_subset_search(const IntersectionData& d,
                                                        const AssembledSurface& x) {
    auto to_refs = [&](const std::vector<int>& vertices) {
        std::vector<CurveRef> refs;
        for (int v : vertices) {
            if (v < d.red_count) refs.push_back({true, v});
            else refs.push_back({false, v - d.red_count});
        }
        return refs;
    };
    auto fills = [&](const std::vector<int>& vertices) {
        return fills_check(x, to_refs(vertices)).fills;
    };
    auto found = tree_subset_search(d, fills);
    if (!found) return std::nullopt;
    return to_refs(*found);
}

namespace {

// Iterative refinement of row/column colors by neighbor color multisets.
struct BipartiteColoring {
    std::vector<int> row_color, col_color;
};

BipartiteColoring refine(const std::vector<std::vector<int>>& m, std::vector<int> row_color,
                         std::vector<int> col_color) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    for (int round = 0; round < rows + cols + 2; ++round) {
        // Rows.
        std::map<std::pair<int, std::vector<int>>, int> row_classes;
        std::vector<std::pair<int, std::vector<int>>> row_sig(rows);
        for (int r = 0; r < rows; ++r) {
            std::vector<int> sig;
            for (int c = 0; c < cols; ++c)
                if (m[r][c]) sig.push_back(col_color[c]);
            std::sort(sig.begin(), sig.end());
            row_sig[r] = {row_color[r], sig};
        }
        for (const auto& s : row_sig) row_classes.emplace(s, 0);
        int id = 0;
        for (auto& [sig, cid] : row_classes) cid = id++;
        std::vector<int> new_row(rows);
        for (int r = 0; r < rows; ++r) new_row[r] = row_classes[row_sig[r]];
        // Columns.
        std::map<std::pair<int, std::vector<int>>, int> col_classes;
        std::vector<std::pair<int, std::vector<int>>> col_sig(cols);
        for (int c = 0; c < cols; ++c) {
            std::vector<int> sig;
            for (int r = 0; r < rows; ++r)
                if (m[r][c]) sig.push_back(new_row[r]);
            std::sort(sig.begin(), sig.end());
            col_sig[c] = {col_color[c], sig};
        }
        for (const auto& s : col_sig) col_classes.emplace(s, 0);
        id = 0;
        for (auto& [sig, cid] : col_classes) cid = id++;
        std::vector<int> new_col(cols);
        for (int c = 0; c < cols; ++c) new_col[c] = col_classes[col_sig[c]];
        if (new_row == row_color && new_col == col_color) break;
        row_color = std::move(new_row);
        col_color = std::move(new_col);
    }
    return {std::move(row_color), std::move(col_color)};
}

std::vector<std::vector<int>> apply_order(const std::vector<std::vector<int>>& m,
                                          const std::vector<int>& row_order,
                                          const std::vector<int>& col_order) {
    std::vector<std::vector<int>> out(row_order.size(), std::vector<int>(col_order.size()));
    for (size_t r = 0; r < row_order.size(); ++r)
        for (size_t c = 0; c < col_order.size(); ++c) out[r][c] = m[row_order[r]][col_order[c]];
    return out;
}

// Individualization-refinement canonical form: refine; if colors are
// discrete, read off the matrix; otherwise individualize each member of
// the first non-singleton class and keep the minimum.
void canonical_rec(const std::vector<std::vector<int>>& m, const BipartiteColoring& coloring,
                   std::optional<std::vector<std::vector<int>>>& best) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;

    auto multiplicity = [](const std::vector<int>& colors) {
        std::map<int, int> mult;
        for (int c : colors) mult[c] += 1;
        return mult;
    };
    auto row_mult = multiplicity(coloring.row_color);
    auto col_mult = multiplicity(coloring.col_color);

    // Find the first non-singleton class (rows preferred).
    int split_row = -1, split_col = -1;
    for (int r = 0; r < rows && split_row < 0; ++r)
        if (row_mult[coloring.row_color[r]] > 1) split_row = r;
    if (split_row < 0)
        for (int c = 0; c < cols && split_col < 0; ++c)
            if (col_mult[coloring.col_color[c]] > 1) split_col = c;

    if (split_row < 0 && split_col < 0) {
        std::vector<int> row_order(rows), col_order(cols);
        for (int r = 0; r < rows; ++r) row_order[r] = r;
        for (int c = 0; c < cols; ++c) col_order[c] = c;
        std::sort(row_order.begin(), row_order.end(),
                  [&](int a, int b) { return coloring.row_color[a] < coloring.row_color[b]; });
        std::sort(col_order.begin(), col_order.end(),
                  [&](int a, int b) { return coloring.col_color[a] < coloring.col_color[b]; });
        auto candidate = apply_order(m, row_order, col_order);
        if (!best || candidate < *best) best = std::move(candidate);
        return;
    }

    if (split_row >= 0) {
        int cls = coloring.row_color[split_row];
        for (int r = 0; r < rows; ++r) {
            if (coloring.row_color[r] != cls) continue;
            auto rc = coloring.row_color;
            rc[r] = -1; // individualize
            canonical_rec(m, refine(m, rc, coloring.col_color), best);
        }
    } else {
        int cls = coloring.col_color[split_col];
        for (int c = 0; c < cols; ++c) {
            if (coloring.col_color[c] != cls) continue;
            auto cc = coloring.col_color;
            cc[c] = -1;
            canonical_rec(m, refine(m, coloring.row_color, cc), best);
        }
    }
}

} // namespace

std::vector<std::vector<int>> bipartite_canonical_form(const std::vector<std::vector<int>>& m) {
    if (m.empty()) return m;
    BipartiteColoring start =
        refine(m, std::vector<int>(m.size(), 0), std::vector<int>(m[0].size(), 0));
    std::optional<std::vector<std::vector<int>>> best;
    canonical_rec(m, start, best);
    return *best;
}

bool bipartite_permutation_equivalent(const std::vector<std::vector<int>>& a,
                                      const std::vector<std::vector<int>>& b) {
    if (a.size() != b.size()) return false;
    if (!a.empty() && a[0].size() != b[0].size()) return false;
    return bipartite_canonical_form(a) == bipartite_canonical_form(b);
}

const std::vector<std::vector<int>>& k5_intersection_fixture() {
    static const std::vector<std::vector<int>> fixture = {
        {1, 0, 0, 1, 0, 1, 0, 0, 0, 0},
        {0, 1, 0, 1, 1, 0, 0, 0, 0, 0},
        {0, 0, 1, 0, 1, 1, 0, 0, 0, 0},
        {0, 0, 0, 1, 0, 0, 1, 0, 0, 1},
        {0, 0, 0, 0, 1, 0, 0, 1, 0, 1},
        {0, 0, 0, 0, 0, 1, 0, 0, 1, 1},
        {1, 0, 0, 0, 0, 0, 1, 0, 1, 0},
        {0, 1, 0, 0, 0, 0, 1, 1, 0, 0},
        {0, 0, 1, 0, 0, 0, 0, 1, 1, 0},
        {1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
    };
    return fixture;
}

std::string matrix_to_json(const std::vector<std::vector<int>>& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : m) j.push_back(row);
    return j.dump();
}

std::vector<std::vector<int>> matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("IoError", std::string("matrix document is not valid JSON: ") + e.what());
    }
    std::vector<std::vector<int>> m;
    for (const auto& row : j) m.push_back(row.get<std::vector<int>>());
    return m;
}

} // namespace forge
