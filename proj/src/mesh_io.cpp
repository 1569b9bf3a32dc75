#include "magbottle/mesh_io.hpp"

#include "magbottle/error.hpp"
#include "magbottle/spectra.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace magbottle {

namespace {

using nlohmann::json;

int parse_int(std::string_view s, std::string_view spec)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw Error(ErrorCode::InvalidArgument, "malformed builtin spec '" + std::string(spec) + "'");
    }
    return value;
}

json parse_document(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("malformed JSON: ") + e.what());
    }
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

Mesh builtin_mesh(std::string_view spec)
{
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, "malformed builtin spec '" + std::string(spec) + "'");
    }
    std::string_view kind = spec.substr(0, colon);
    std::string_view rest = spec.substr(colon + 1);
    if (kind == "sphere") return build_icosphere(parse_int(rest, spec));
    if (kind == "torus") {
        auto x = rest.find('x');
        if (x == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "torus spec needs <N>x<M>, got '" + std::string(spec) + "'");
        }
        return build_flat_torus(parse_int(rest.substr(0, x), spec), parse_int(rest.substr(x + 1), spec));
    }
    if (kind == "genus") {
        auto c = rest.find(':');
        if (c == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "genus spec needs <g>:<refine>, got '" + std::string(spec) + "'");
        }
        return build_genus_g(parse_int(rest.substr(0, c), spec), parse_int(rest.substr(c + 1), spec));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown builtin mesh kind '" + std::string(kind) + "'");
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Mesh parse_mesh_json(std::string_view text, bool require_valid)
{
    json doc = parse_document(text);
    Mesh mesh;
    try {
        int nv = doc.at("vertices").get<int>();
        std::vector<Face> faces = doc.at("faces").get<std::vector<Face>>();
        std::optional<int> genus;
        if (doc.contains("genus")) genus = doc["genus"].get<int>();
        mesh.surface = CombinatorialSurface::from_faces(nv, std::move(faces), genus);
        ValidationReport topo = validate(mesh.surface);
        if (!topo.ok()) {
            if (!require_valid) return mesh;
            throw Error(ErrorCode::InvalidMesh, std::string(violation_name(topo.issues.front().kind)) + ": " + topo.issues.front().detail);
        }
        if (doc.contains("positions")) {
            mesh.metric = MeshMetric::from_positions(mesh.surface, doc["positions"].get<std::vector<Vec3>>());
        } else if (doc.contains("edge_lengths")) {
            mesh.metric = MeshMetric::from_edge_lengths(mesh.surface, doc["edge_lengths"].get<std::vector<double>>());
        } else {
            mesh.metric = MeshMetric::from_edge_lengths(
                mesh.surface, std::vector<double>(static_cast<std::size_t>(mesh.surface.num_edges()), 1.0));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("bad mesh document: ") + e.what());
    }
    ValidationReport report = validate(mesh.surface, mesh.metric);
    if (require_valid && !report.ok()) {
        throw Error(ErrorCode::InvalidMesh, std::string(violation_name(report.issues.front().kind)) + ": " + report.issues.front().detail);
    }
    return mesh;
}

Mesh read_mesh_json(const std::string& path, bool require_valid)
{
    return parse_mesh_json(read_text_file(path), require_valid);
}

void write_mesh_json(std::ostream& out, const Mesh& mesh)
{
    const auto& s = mesh.surface;
    out << "{\"vertices\":" << s.num_vertices() << ",\"edges\":" << s.num_edges() << ",\"genus\":" << s.genus()
        << ",\n\"faces\":[";
    for (int f = 0; f < s.num_faces(); ++f) {
        const Face& face = s.face(f);
        out << (f ? "," : "") << '[' << face[0] << ',' << face[1] << ',' << face[2] << ']';
    }
    out << "],\n\"edge_lengths\":[";
    for (std::size_t e = 0; e < mesh.metric.edge_lengths.size(); ++e) {
        out << (e ? "," : "") << format_double(mesh.metric.edge_lengths[e]);
    }
    out << ']';
    if (mesh.metric.has_positions()) {
        out << ",\n\"positions\":[";
        for (std::size_t v = 0; v < mesh.metric.positions.size(); ++v) {
            const Vec3& p = mesh.metric.positions[v];
            out << (v ? "," : "") << '[' << format_double(p[0]) << ',' << format_double(p[1]) << ','
                << format_double(p[2]) << ']';
        }
        out << ']';
    }
    out << "}\n";
}

FluxAssignment parse_flux_json(std::string_view text, const CombinatorialSurface& surface)
{
    json doc = parse_document(text);
    try {
        if (doc.contains("uniform_total")) return FluxAssignment::uniform(surface, doc["uniform_total"].get<double>());
        FluxAssignment flux{doc.at("flux").get<std::vector<double>>()};
        if (flux.flux.size() != static_cast<std::size_t>(surface.num_faces())) {
            throw Error(
                ErrorCode::DimensionMismatch,
                "flux has " + std::to_string(flux.flux.size()) + " entries for " + std::to_string(surface.num_faces()) +
                    " faces");
        }
        return flux;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("bad flux document: ") + e.what());
    }
}

FluxAssignment read_flux_json(const std::string& path, const CombinatorialSurface& surface)
{
    return parse_flux_json(read_text_file(path), surface);
}

Connection parse_connection_json(std::string_view text, const CombinatorialSurface& surface)
{
    json doc = parse_document(text);
    try {
        Connection conn{doc.at("phase").get<std::vector<double>>()};
        if (conn.phase.size() != static_cast<std::size_t>(surface.num_edges())) {
            throw Error(
                ErrorCode::MissingPhase,
                "connection has " + std::to_string(conn.phase.size()) + " phases for " +
                    std::to_string(surface.num_edges()) + " edges");
        }
        return conn;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("bad connection document: ") + e.what());
    }
}

Connection read_connection_json(const std::string& path, const CombinatorialSurface& surface)
{
    return parse_connection_json(read_text_file(path), surface);
}

void write_connection_json(std::ostream& out, const CombinatorialSurface& surface, const Connection& conn)
{
    out << "{\"chern\":" << chern_number(surface, conn) << ",\n\"edges\":[";
    for (int e = 0; e < surface.num_edges(); ++e) {
        out << (e ? "," : "") << '[' << surface.edge(e).v0 << ',' << surface.edge(e).v1 << ']';
    }
    out << "],\n\"phase\":[";
    for (std::size_t e = 0; e < conn.phase.size(); ++e) out << (e ? "," : "") << format_double(conn.phase[e]);
    out << "]}\n";
}

void write_validation_json(std::ostream& out, const ValidationReport& report)
{
    out << "{\"valid\":" << (report.ok() ? "true" : "false") << ",\"issues\":[";
    for (std::size_t i = 0; i < report.issues.size(); ++i) {
        const auto& issue = report.issues[i];
        out << (i ? "," : "") << "\n{\"kind\":\"" << violation_name(issue.kind) << "\",\"element\":" << issue.element
            << ",\"detail\":\"" << escape(issue.detail) << "\"}";
    }
    out << "]}\n";
}

} // namespace magbottle
