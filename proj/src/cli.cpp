#include "magbottle/cli.hpp"

#include "magbottle/angles.hpp"
#include "magbottle/gauge.hpp"
#include "magbottle/homology.hpp"
#include "magbottle/magnetic_laplacian.hpp"
#include "magbottle/mesh_io.hpp"
#include "magbottle/spectra.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace magbottle {

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NotQuantizable: return 2;
    case ErrorCode::InvalidMesh: return 3;
    case ErrorCode::NoConvergence: return 4;
    default: return 1;
    }
}

namespace {

struct Config
{
    std::string builtin;
    std::string mesh_path;
    std::optional<double> uniform_total;
    std::optional<double> area_total;
    std::string flux_path;
    std::string weights;
    std::string basis = "auto";
    int k = 3;
    double tol = 1e-10;
    int max_iterations = 20000;
    std::optional<std::uint64_t> seed;
    double scale = 1.0;
    int jobs = 1;
    std::string format;
    std::string output;
    std::string theta;
    std::string grid;
    std::string c1 = "0:4";
    std::string profile = "uniform";
    std::string dump_matrix;
    std::string connection;
    std::string reference;
    bool validate = false;
    std::string recipe;
};

[[noreturn]] void bad_argument(const std::string& what)
{
    throw Error(ErrorCode::InvalidArgument, what);
}

std::uint64_t resolve_seed(const Config& cfg)
{
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("MAGBOTTLE_SEED")) {
        std::uint64_t v = 0;
        std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            bad_argument("MAGBOTTLE_SEED is not an unsigned integer: '" + std::string(s) + "'");
        }
        return v;
    }
    return 42;
}

SolverOptions solver_options(const Config& cfg)
{
    if (!(cfg.tol > 0.0)) bad_argument("--tol must be positive");
    if (cfg.k < 1) bad_argument("--k must be at least 1");
    SolverOptions o;
    o.tol = cfg.tol;
    o.max_iterations = cfg.max_iterations;
    o.seed = resolve_seed(cfg);
    return o;
}

WeightScheme parse_scheme(const std::string& s, WeightScheme fallback)
{
    if (s.empty()) return fallback;
    if (s == "unit") return WeightScheme::Unit;
    if (s == "cotan") return WeightScheme::Cotan;
    bad_argument("unknown weight scheme '" + s + "'");
}

Mesh load_mesh(const Config& cfg, bool require_valid = true)
{
    if (cfg.builtin.empty() == cfg.mesh_path.empty()) bad_argument("exactly one of --builtin or --mesh is required");
    if (!cfg.builtin.empty()) return builtin_mesh(cfg.builtin);
    return read_mesh_json(cfg.mesh_path, require_valid);
}

FluxAssignment load_flux(const Config& cfg, const Mesh& mesh)
{
    int sources = (cfg.uniform_total ? 1 : 0) + (cfg.area_total ? 1 : 0) + (cfg.flux_path.empty() ? 0 : 1);
    if (sources > 1) bad_argument("flux sources are mutually exclusive");
    if (cfg.uniform_total) return FluxAssignment::uniform(mesh.surface, *cfg.uniform_total);
    if (cfg.area_total) return FluxAssignment::area_weighted(mesh.surface, mesh.metric, *cfg.area_total);
    if (!cfg.flux_path.empty()) return read_flux_json(cfg.flux_path, mesh.surface);
    return FluxAssignment::uniform(mesh.surface, 0.0);
}

bool has_flux_source(const Config& cfg)
{
    return cfg.uniform_total || cfg.area_total || !cfg.flux_path.empty();
}

// Coordinate loops for builtin tori so that theta reads as the pair of boundary twists.
HomologyBasis pick_basis(const Config& cfg, const Mesh& mesh)
{
    if (cfg.basis != "auto" && cfg.basis != "canonical") bad_argument("--basis must be auto or canonical");
    if (cfg.basis == "auto" && cfg.builtin.rfind("torus:", 0) == 0) {
        std::string dims = cfg.builtin.substr(6);
        auto x = dims.find('x');
        return flat_torus_basis(mesh.surface, std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1)));
    }
    return canonicalize_basis(tree_cotree_basis(mesh.surface));
}

std::vector<double> parse_doubles(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            bad_argument("not a number: '" + item + "'");
        }
    }
    return out;
}

std::vector<int> parse_grid(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, 'x')) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty() || v < 1) {
            bad_argument("malformed grid '" + s + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) bad_argument("empty grid");
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s)
{
    auto colon = s.find(':');
    try {
        if (colon == std::string::npos) {
            std::int64_t v = std::stoll(s);
            return {v, v};
        }
        return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
    } catch (const std::exception&) {
        bad_argument("malformed Chern range '" + s + "'");
    }
}

void write_ints(std::ostream& out, const std::vector<std::int64_t>& xs)
{
    out << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    out << ']';
}

void write_doubles(std::ostream& out, const std::vector<double>& xs)
{
    out << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << format_double(xs[i]);
    out << ']';
}

void write_matrix(std::ostream& out, const IntMatrix& m)
{
    out << '[';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << (i ? "," : "");
        write_ints(out, m[i]);
    }
    out << ']';
}

int cmd_mesh(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg, !cfg.validate);
    if (cfg.validate) {
        ValidationReport report = mesh.metric.edge_lengths.empty() ? validate(mesh.surface) : validate(mesh.surface, mesh.metric);
        write_validation_json(out, report);
        return report.ok() ? 0 : 3;
    }
    write_mesh_json(out, mesh);
    return 0;
}

int cmd_homology(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    const auto& s = mesh.surface;
    HomologyGroups groups = betti_and_torsion(boundary_matrices(s));
    out << "{\"vertices\":" << s.num_vertices() << ",\"edges\":" << s.num_edges() << ",\"faces\":" << s.num_faces()
        << ",\"genus\":" << s.genus() << ",\"b1\":" << groups.b1 << ",\"torsion\":";
    write_ints(out, groups.torsion);
    if (s.genus() == 0) {
        out << ",\"intersection\":[],\"cycles\":[]}\n";
        return 0;
    }
    HomologyBasis raw = tree_cotree_basis(s);
    HomologyBasis basis = canonicalize_basis(raw);
    out << ",\n\"generator_intersection\":";
    write_matrix(out, raw.intersection);
    out << ",\n\"intersection\":";
    write_matrix(out, basis.intersection);
    // Each cycle as [edge, coefficient] pairs on the reference orientation.
    out << ",\n\"cycles\":[";
    for (std::size_t c = 0; c < basis.cycles.size(); ++c) {
        out << (c ? ",\n" : "") << '[';
        bool first = true;
        for (std::size_t e = 0; e < basis.cycles[c].size(); ++e) {
            if (basis.cycles[c][e] == 0) continue;
            out << (first ? "" : ",") << '[' << e << ',' << basis.cycles[c][e] << ']';
            first = false;
        }
        out << ']';
    }
    out << "]}\n";
    return 0;
}

int cmd_flux_check(const Config& cfg, std::ostream& out, std::ostream& err)
{
    Mesh mesh = load_mesh(cfg);
    if (!has_flux_source(cfg)) bad_argument("flux-check needs --uniform-total, --area-total or --flux");
    FluxAssignment flux = load_flux(cfg, mesh);
    try {
        std::int64_t c = check_weyl(mesh.surface, flux);
        out << "{\"quantized\":true,\"chern\":" << c << "}\n";
        return 0;
    } catch (const NotQuantizable& e) {
        out << "{\"quantized\":false,\"total\":" << format_double(e.total_flux())
            << ",\"defect\":" << format_double(e.defect()) << "}\n";
        err << "ERR 2 " << error_name(e.code()) << ": " << e.what() << '\n';
        return 2;
    }
}

int cmd_connection(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    Connection conn = build_connection(mesh.surface, load_flux(cfg, mesh));
    write_connection_json(out, mesh.surface, conn);
    return 0;
}

int cmd_character(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    if (cfg.connection.empty()) bad_argument("character needs --connection");
    Connection conn = read_connection_json(cfg.connection, mesh.surface);
    Connection reference = cfg.reference.empty() ? Connection::trivial(mesh.surface)
                                                 : read_connection_json(cfg.reference, mesh.surface);
    HomologyBasis basis = pick_basis(cfg, mesh);
    ThetaPoint theta = character(mesh.surface, conn, reference, basis);
    bool equivalent = find_gauge(mesh.surface, conn, reference).has_value();
    out << "{\"theta\":";
    write_doubles(out, theta.theta);
    out << ",\"gauge_equivalent\":" << (equivalent ? "true" : "false") << "}\n";
    return 0;
}

int cmd_spectrum(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    SolverOptions solver = solver_options(cfg);
    FluxAssignment flux = load_flux(cfg, mesh);
    std::int64_t chern = check_weyl(mesh.surface, flux);
    Connection conn = build_connection(mesh.surface, flux);
    std::vector<double> theta = parse_doubles(cfg.theta);
    const auto g2 = static_cast<std::size_t>(2 * mesh.surface.genus());
    if (theta.empty()) theta.assign(g2, 0.0);
    if (theta.size() != g2) {
        throw Error(
            ErrorCode::DimensionMismatch,
            "--theta needs " + std::to_string(g2) + " angles, got " + std::to_string(theta.size()));
    }
    if (g2 > 0) conn = twist_connection(conn, ThetaPoint{theta}, build_twist_cocycles(mesh.surface, pick_basis(cfg, mesh)));
    auto [weights, mass] = make_weights(parse_scheme(cfg.weights, WeightScheme::Unit), mesh.surface, mesh.metric);
    MagneticLaplacian h = assemble(mesh.surface, weights, mass, conn, cfg.scale);
    h.theta = theta;
    if (!cfg.dump_matrix.empty()) {
        std::ofstream dump(cfg.dump_matrix);
        if (!dump) throw Error(ErrorCode::IoError, "cannot write " + cfg.dump_matrix);
        write_coordinate(dump, h);
    }
    SpectrumResult r = lowest_eigenvalues(h, cfg.k, solver);
    out << "{\"dimension\":" << h.dim << ",\"chern\":" << chern << ",\"weights\":\"" << scheme_name(h.scheme)
        << "\",\"method\":\"" << r.method << "\",\"iterations\":" << r.iterations << ",\n\"theta\":";
    write_doubles(out, theta);
    out << ",\n\"eigenvalues\":";
    write_doubles(out, r.eigenvalues);
    out << ",\n\"residuals\":";
    write_doubles(out, r.residuals);
    out << "}\n";
    return 0;
}

void emit_sweep(const SweepTable& table, const std::string& format, std::ostream& out)
{
    if (format == "json")
        write_sweep_json(out, table);
    else
        write_sweep_csv(out, table);
}

int cmd_sweep(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    SweepOptions o;
    o.solver = solver_options(cfg);
    o.scheme = parse_scheme(cfg.weights, WeightScheme::Unit);
    o.k = cfg.k;
    o.scale = cfg.scale;
    o.jobs = cfg.jobs;
    FluxAssignment flux = load_flux(cfg, mesh);
    if (mesh.surface.genus() == 0) throw Error(ErrorCode::GenusZero, "flux torus of a sphere is a single point");
    std::vector<int> res = cfg.grid.empty() ? std::vector<int>(static_cast<std::size_t>(2 * mesh.surface.genus()), 4)
                                            : parse_grid(cfg.grid);
    SweepTable table = theta_sweep(mesh, flux, pick_basis(cfg, mesh), res, o);
    emit_sweep(table, cfg.format, out);
    return 0;
}

int cmd_ladder(const Config& cfg, std::ostream& out)
{
    Mesh mesh = load_mesh(cfg);
    LadderOptions o;
    o.solver = solver_options(cfg);
    o.scheme = parse_scheme(cfg.weights, WeightScheme::Cotan);
    o.scale = cfg.scale;
    if (cfg.profile == "area")
        o.profile = FluxProfile::AreaWeighted;
    else if (cfg.profile != "uniform")
        bad_argument("--profile must be uniform or area");
    auto [lo, hi] = parse_range(cfg.c1);
    auto rows = flux_ladder(mesh, lo, hi, cfg.k, o);
    if (cfg.format == "json")
        write_ladder_json(out, rows);
    else
        write_ladder_csv(out, rows);
    return 0;
}

int cmd_repro(const Config& cfg, std::ostream& out)
{
    const std::string& name = cfg.recipe;
    SolverOptions solver = solver_options(cfg);
    if (name == "homology") {
        out << "mesh,genus,b1,torsion\n";
        for (const char* spec : {"sphere:2", "torus:8x8", "genus:2:0", "genus:3:0"}) {
            Mesh mesh = builtin_mesh(spec);
            HomologyGroups groups = betti_and_torsion(boundary_matrices(mesh.surface));
            out << spec << ',' << mesh.surface.genus() << ',' << groups.b1 << ',' << groups.torsion.size() << '\n';
        }
        return 0;
    }
    if (name == "flat-twist" || name == "determinism") {
        const bool full = name == "flat-twist";
        Config c = cfg;
        c.builtin = "torus:8x8";
        Mesh mesh = builtin_mesh(c.builtin);
        SweepOptions o;
        o.solver = solver;
        o.k = full ? 64 : 3;
        o.jobs = cfg.jobs;
        std::vector<int> res = full ? std::vector<int>{5, 5} : std::vector<int>{4, 4};
        emit_sweep(theta_sweep(mesh, FluxAssignment::uniform(mesh.surface, 0.0), pick_basis(c, mesh), res, o), "csv", out);
        return 0;
    }
    if (name == "gauge") {
        Mesh mesh = builtin_mesh("torus:8x8");
        FluxAssignment flux = FluxAssignment::uniform(mesh.surface, 4 * kTwoPi);
        Connection base = build_connection(mesh.surface, flux);
        auto [weights, mass] = unit_weights(mesh.surface);
        std::mt19937_64 rng(solver.seed);
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        out << "transform";
        for (int j = 1; j <= 10; ++j) out << ",lambda_" << j;
        out << '\n';
        for (int t = 0; t <= 20; ++t) {
            GaugeTransformation u{std::vector<double>(static_cast<std::size_t>(mesh.surface.num_vertices()), 0.0)};
            if (t > 0)
                for (double& a : u.angle) a = angle(rng);
            MagneticLaplacian h = assemble(mesh.surface, weights, mass, apply_gauge(mesh.surface, base, u));
            SpectrumResult r = lowest_eigenvalues(h, 10, solver);
            out << t;
            for (double l : r.eigenvalues) out << ',' << format_double(l);
            out << '\n';
        }
        return 0;
    }
    if (name == "landau") {
        out << "level,chern,lowest_cluster_mean,lowest_cluster_multiplicity,lambda_1,lambda_2,lambda_3,lambda_4,"
               "lambda_5,lambda_6,lambda_7,lambda_8,lambda_9\n";
        LadderOptions o;
        o.solver = solver;
        for (int level = 3; level <= 5; ++level) {
            Mesh mesh = build_icosphere(level);
            for (const auto& row : flux_ladder(mesh, 0, 4, 9, o)) {
                out << level << ',' << row.chern << ',' << format_double(row.clusters.front().mean) << ','
                    << row.clusters.front().multiplicity;
                for (double l : row.spectrum.eigenvalues) out << ',' << format_double(l);
                out << '\n';
            }
        }
        return 0;
    }
    bad_argument("unknown recipe '" + name + "' (homology, flat-twist, gauge, landau, determinism)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Magnetic Laplacians on triangulated closed surfaces", "magbottle"};
    app.require_subcommand(1);

    auto add_mesh = [&cfg](CLI::App* sub) {
        auto* b = sub->add_option("--builtin", cfg.builtin, "sphere:<level>, torus:<N>x<M> or genus:<g>:<refine>");
        auto* m = sub->add_option("--mesh", cfg.mesh_path, "mesh JSON file");
        b->excludes(m);
        sub->add_option("--output,-o", cfg.output, "write results to this file");
    };
    auto add_flux = [&cfg](CLI::App* sub) {
        auto* u = sub->add_option("--uniform-total", cfg.uniform_total, "total flux spread evenly over faces");
        auto* a = sub->add_option("--area-total", cfg.area_total, "total flux proportional to face area");
        auto* f = sub->add_option("--flux", cfg.flux_path, "flux JSON file");
        u->excludes(a)->excludes(f);
        a->excludes(f);
    };
    auto add_solver = [&cfg](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "number of eigenvalues");
        sub->add_option("--tol", cfg.tol, "residual tolerance");
        sub->add_option("--max-iter", cfg.max_iterations, "operator applications before giving up");
        sub->add_option("--seed", cfg.seed, "Lanczos start-block seed (default 42 or MAGBOTTLE_SEED)");
        sub->add_option("--weights", cfg.weights, "unit or cotan");
        sub->add_option("--scale", cfg.scale, "overall coupling factor");
    };
    auto add_basis = [&cfg](CLI::App* sub) {
        sub->add_option("--basis", cfg.basis, "auto (coordinate loops on builtin tori) or canonical");
    };

    auto* mesh = app.add_subcommand("mesh", "generate or load a mesh and emit it as JSON");
    add_mesh(mesh);
    mesh->add_flag("--validate", cfg.validate, "report violations instead of the mesh");

    auto* homology = app.add_subcommand("homology", "Betti number, torsion and canonical cycles");
    add_mesh(homology);

    auto* flux_check = app.add_subcommand("flux-check", "integrality verdict and Chern number");
    add_mesh(flux_check);
    add_flux(flux_check);

    auto* connection = app.add_subcommand("connection", "connection realizing a flux assignment");
    add_mesh(connection);
    add_flux(connection);

    auto* character_cmd = app.add_subcommand("character", "flat-torus coordinates of a connection");
    add_mesh(character_cmd);
    add_basis(character_cmd);
    character_cmd->add_option("--connection", cfg.connection, "connection JSON")->required();
    character_cmd->add_option("--reference", cfg.reference, "reference connection JSON (default trivial)");

    auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues at one twist");
    add_mesh(spectrum);
    add_flux(spectrum);
    add_solver(spectrum);
    add_basis(spectrum);
    spectrum->add_option("--theta", cfg.theta, "comma-separated twist angles, one per generator");
    spectrum->add_option("--dump-matrix", cfg.dump_matrix, "write the symmetrized matrix in coordinate form");

    auto* sweep = app.add_subcommand("sweep", "spectra over a uniform twist grid");
    add_mesh(sweep);
    add_flux(sweep);
    add_solver(sweep);
    add_basis(sweep);
    sweep->add_option("--grid", cfg.grid, "per-axis resolution, e.g. 4x4");
    sweep->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--jobs", cfg.jobs, "worker threads");

    auto* ladder = app.add_subcommand("ladder", "lowest eigenvalues over a range of Chern numbers");
    add_mesh(ladder);
    add_solver(ladder);
    ladder->add_option("--c1", cfg.c1, "Chern range lo:hi");
    ladder->add_option("--profile", cfg.profile, "uniform or area");
    ladder->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* repro = app.add_subcommand("repro", "run a named reproduction recipe");
    repro->add_option("name", cfg.recipe, "homology, flat-twist, gauge, landau or determinism")->required();
    repro->add_option("--seed", cfg.seed, "seed");
    repro->add_option("--jobs", cfg.jobs, "worker threads");
    repro->add_option("--output,-o", cfg.output, "write results to this file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "ERR 1 Usage: " << e.what() << '\n';
        return 1;
    }

    std::ostringstream buffer;
    std::ostream& sink = cfg.output.empty() ? out : buffer;
    int status = 0;
    try {
        if (mesh->parsed())
            status = cmd_mesh(cfg, sink);
        else if (homology->parsed())
            status = cmd_homology(cfg, sink);
        else if (flux_check->parsed())
            status = cmd_flux_check(cfg, sink, err);
        else if (connection->parsed())
            status = cmd_connection(cfg, sink);
        else if (character_cmd->parsed())
            status = cmd_character(cfg, sink);
        else if (spectrum->parsed())
            status = cmd_spectrum(cfg, sink);
        else if (sweep->parsed())
            status = cmd_sweep(cfg, sink);
        else if (ladder->parsed())
            status = cmd_ladder(cfg, sink);
        else if (repro->parsed())
            status = cmd_repro(cfg, sink);
    } catch (const NotQuantizable& e) {
        err << "ERR 2 " << error_name(e.code()) << ": " << e.what() << " (defect " << format_double(e.defect()) << ")\n";
        return 2;
    } catch (const Error& e) {
        int code = exit_code_for(e.code());
        err << "ERR " << code << ' ' << error_name(e.code()) << ": " << e.what() << '\n';
        return code;
    } catch (const std::exception& e) {
        err << "ERR 1 Internal: " << e.what() << '\n';
        return 1;
    }
    if (!cfg.output.empty()) {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "ERR 1 " << error_name(ErrorCode::IoError) << ": cannot write " << cfg.output << '\n';
            return 1;
        }
        file << buffer.str();
    }
    return status;
}

} // namespace magbottle
