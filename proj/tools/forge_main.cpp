#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "forge/analysis.hpp"
#include "forge/commands.hpp"
#include "forge/cycles.hpp"
#include "forge/error.hpp"
#include "forge/graphs.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

void emit(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) forge::fail("IoError", "cannot write " + path);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) forge::fail("IoError", "cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

forge::RotationMap load_map(const std::string& spec) {
    if (spec.rfind("catalog:", 0) == 0) {
        auto rest = spec.substr(8);
        auto comma = rest.find(',');
        if (comma == std::string::npos) return forge::catalog_map(rest);
        return forge::catalog_map(rest.substr(0, comma), std::stoi(rest.substr(comma + 1)));
    }
    return forge::RotationMap::from_json(slurp(spec));
}

forge::ColoredGluingGraph load_gluing(const std::string& spec, long long max_cover) {
    if (spec.rfind("theta:", 0) == 0)
        return forge::fixtures::theta_coloring(std::stoi(spec.substr(6)));
    if (spec.rfind("theta_cover:", 0) == 0) {
        auto rest = spec.substr(12);
        auto comma = rest.find(',');
        int d = std::stoi(rest.substr(0, comma));
        int iterations = comma == std::string::npos ? 1 : std::stoi(rest.substr(comma + 1));
        forge::HalfEdgeGraph base = forge::theta_graph(d);
        forge::CoveringMap cover = forge::identity_cover(base);
        for (int i = 0; i < iterations; ++i) {
            forge::Mod2Cover next = forge::mod2_homology_cover(cover.total, max_cover);
            cover = i == 0 ? next.cover : forge::compose_covers(next.cover, cover);
        }
        return forge::make_colored_gluing_graph(cover);
    }
    return forge::colored_gluing_from_labeled_graph(forge::HalfEdgeGraph::from_json(slurp(spec)));
}

forge::AssembledSurface named_surface(const std::string& name) {
    if (name.rfind("chain:", 0) == 0) return forge::fixtures::chain(std::stoi(name.substr(6)));
    if (name.rfind("beachball_theta:", 0) == 0)
        return forge::fixtures::beachball_theta(std::stoi(name.substr(16)));
    if (name == "k5") return forge::k5_tetrahedra_surface();
    if (name == "cube_cover4") return forge::fixtures::cube_over_girth4_cover();
    forge::fail("UnknownName", "no surface named '" + name + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge: builds closed hyperbolic surfaces from polygon blocks glued along "
                 "graphs, and verifies their systole geometry"};
    app.require_subcommand(1);

    std::string out_path;
    long long max_cover_size = 1000000;
    double tolerance = 1e-8;
    double theta = kPi / 2;
    unsigned seed = 1;
    app.add_option("--max-cover-size", max_cover_size, "cap on covering graph vertices");
    app.add_option("--tolerance", tolerance, "numerical tolerance for report margins");
    app.add_option("--theta", theta, "polygon angle for deformed checks");
    app.add_option("--seed", seed, "seed for randomized oracle sampling");

    // maps emit
    auto* maps = app.add_subcommand("maps", "combinatorial map catalog");
    auto* maps_emit = maps->add_subcommand("emit", "emit a catalog map as JSON");
    std::string map_name;
    int map_param = 0;
    maps_emit->add_option("name", map_name)->required();
    maps_emit->add_option("--param", map_param, "catalog parameter (q, d or n)");
    maps_emit->add_option("-o,--output", out_path);

    // cover double / certify
    auto* cover = app.add_subcommand("cover", "girth-doubling covers");
    auto* cover_double = cover->add_subcommand("double", "mod-2 homology cover of a graph");
    std::string cover_graph;
    int cover_iterations = 1;
    cover_double->add_option("--graph", cover_graph, "graph name or JSON file")->required();
    cover_double->add_option("--iterations", cover_iterations);
    cover_double->add_option("-o,--output", out_path);
    auto* cover_certify = cover->add_subcommand("certify", "certify girth doubling");
    cover_certify->add_option("--graph", cover_graph, "graph name or JSON file");
    std::string cover_file;
    cover_certify->add_option("--cover", cover_file, "covering JSON file");
    cover_certify->add_option("--iterations", cover_iterations);
    cover_certify->add_option("-o,--output", out_path);

    // assemble
    auto* assemble_cmd = app.add_subcommand("assemble", "glue blocks along a colored graph");
    std::string map_spec, graph_spec, report_path;
    assemble_cmd->add_option("--map", map_spec, "catalog:<name>[,param] or JSON file")
        ->required();
    assemble_cmd
        ->add_option("--graph", graph_spec, "theta:<d>, theta_cover:<d,n>, or labeled JSON file")
        ->required();
    assemble_cmd->add_option("--report", report_path, "write the run report here");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "intersection and criticality analysis");
    std::string surface_name = "chain:2";
    int oracle_samples = 0;
    analyze->add_option("--surface", surface_name,
                        "chain:<g>, beachball_theta:<q>, k5, cube_cover4");
    analyze->add_option("--oracle-samples", oracle_samples,
                        "cross-check the determinant oracle on this many random bipartite graphs");
    analyze->add_option("-o,--output", out_path);

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "rebuild a documented example");
    std::string example;
    reproduce->add_option("example", example,
                          "chain:<g>, beachball_theta:<q>, k5, doubled_theta_tower:<d,n>")
        ->required();
    reproduce->add_option("-o,--output", out_path);

    // verify-lemmas
    auto* verify = app.add_subcommand("verify-lemmas", "polygon identities over a q range");
    int q_min = 3, q_max = 12;
    verify->add_option("--q-min", q_min);
    verify->add_option("--q-max", q_max);
    verify->add_option("-o,--output", out_path);

    // export
    auto* export_cmd = app.add_subcommand("export", "serialize objects");
    std::string what, format = "json";
    export_cmd->add_option("what", what)->required();
    export_cmd->add_option("--format", format, "json or dot");
    export_cmd->add_option("-o,--output", out_path);

    // search-k5
    auto* search = app.add_subcommand("search-k5",
                                      "enumerate twist-free gluings of five tetrahedral blocks");
    long long search_limit = 0;
    search->add_option("--limit", search_limit, "cap on labelings tried (0 = all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (maps_emit->parsed()) {
            emit(forge::catalog_map(map_name, map_param).to_json(), out_path);
            return 0;
        }
        if (cover_double->parsed()) {
            forge::HalfEdgeGraph base = cover_graph.find('.') == std::string::npos
                                            ? forge::graph_by_name(cover_graph)
                                            : forge::HalfEdgeGraph::from_json(slurp(cover_graph));
            forge::CoveringMap cover_map = forge::identity_cover(base);
            for (int i = 0; i < cover_iterations; ++i) {
                forge::Mod2Cover next = forge::mod2_homology_cover(cover_map.total, max_cover_size);
                cover_map = i == 0 ? next.cover : forge::compose_covers(next.cover, cover_map);
            }
            emit(cover_map.to_json(), out_path);
            return 0;
        }
        if (cover_certify->parsed()) {
            forge::CoveringMap cover_map;
            if (!cover_file.empty()) {
                cover_map = forge::CoveringMap::from_json(slurp(cover_file));
            } else {
                forge::require(!cover_graph.empty(), "UnknownName",
                               "certify needs --graph or --cover");
                forge::HalfEdgeGraph base =
                    cover_graph.find('.') == std::string::npos
                        ? forge::graph_by_name(cover_graph)
                        : forge::HalfEdgeGraph::from_json(slurp(cover_graph));
                cover_map = forge::identity_cover(base);
                for (int i = 0; i < cover_iterations; ++i) {
                    forge::Mod2Cover next =
                        forge::mod2_homology_cover(cover_map.total, max_cover_size);
                    cover_map = i == 0 ? next.cover : forge::compose_covers(next.cover, cover_map);
                }
            }
            forge::DoublingCertificate cert = forge::evaluate_girth_doubling(cover_map);
            emit(cert.to_json(), out_path);
            return cert.passed ? 0 : 1;
        }
        if (assemble_cmd->parsed()) {
            forge::Block b = forge::build_block(load_map(map_spec));
            forge::AssembledSurface x = forge::assemble(b, load_gluing(graph_spec, max_cover_size));
            forge::RunReport rep;
            rep.command = "assemble --map " + map_spec + " --graph " + graph_spec;
            rep.inputs["surface"] = std::to_string(forge::fnv1a_hash(x.to_json()));
            int g = forge::genus(x);
            rep.add("genus", true, std::to_string(g), "computed");
            int count = forge::systole_count(x);
            rep.add("systole_count", true, std::to_string(count), "formula == traced");
            double expect = x.block().p * forge::deformed_side_length(x.block().q, theta);
            double worst = 0;
            const forge::CurveSystem& cs = x.curves();
            for (size_t i = 0; i < cs.red_curves.size(); ++i)
                worst = std::max(worst, std::abs(forge::holonomy_length(
                                            x, {true, (int)i}, theta) - expect));
            for (size_t i = 0; i < cs.blue_curves.size(); ++i)
                worst = std::max(worst, std::abs(forge::holonomy_length(
                                            x, {false, (int)i}, theta) - expect));
            rep.add("holonomy_margin", worst < tolerance, std::to_string(worst),
                    "< " + std::to_string(tolerance));
            emit(rep.to_json(), report_path.empty() ? out_path : report_path);
            return rep.passed() ? 0 : 1;
        }
        if (analyze->parsed()) {
            if (oracle_samples > 0) {
                std::mt19937 rng(seed);
                long long agree = 0;
                for (int s = 0; s < oracle_samples; ++s) {
                    int rows = 2 + (int)(rng() % 5), cols = 2 + (int)(rng() % 5);
                    std::vector<std::pair<forge::Vertex, forge::Vertex>> edges;
                    for (int r = 0; r < rows; ++r)
                        for (int c = 0; c < cols; ++c)
                            if (rng() % 2) edges.push_back({r, rows + c});
                    forge::HalfEdgeGraph g =
                        forge::graph_from_edge_list(rows + cols, edges);
                    forge::IntMatrix adj(rows + cols,
                                         std::vector<forge::BigInt>(rows + cols, 0));
                    for (const auto& [u, v] : edges) adj[u][v] = adj[v][u] = 1;
                    if (forge::harary_determinant(g) == forge::exact_determinant(adj)) ++agree;
                }
                std::cout << "oracle agreement: " << agree << "/" << oracle_samples << "\n";
                return agree == oracle_samples ? 0 : 1;
            }
            forge::AssembledSurface x = named_surface(surface_name);
            forge::CriticalityReport rep = forge::criticality_report(x, theta);
            emit(rep.to_json(), out_path);
            return 0;
        }
        if (reproduce->parsed()) {
            forge::RunReport rep = forge::cmd_reproduce(example);
            emit(rep.to_json(), out_path);
            return rep.passed() ? 0 : 1;
        }
        if (verify->parsed()) {
            forge::RunReport rep = forge::cmd_verify_lemmas(q_min, q_max);
            emit(rep.to_json(), out_path);
            return rep.passed() ? 0 : 1;
        }
        if (export_cmd->parsed()) {
            emit(forge::cmd_export(what, format), out_path);
            return 0;
        }
        if (search->parsed()) {
            forge::K5SearchResult r =
                forge::search_k5_gluings(forge::k5_intersection_fixture(), search_limit);
            std::cout << "labelings tried: " << r.labelings_tried << "\n"
                      << "blue arcs close in 3 steps: " << r.closing << "\n"
                      << "matching the published matrix: " << r.matching_fixture << "\n";
            return 0;
        }
    } catch (const forge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
