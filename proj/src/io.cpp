#include "fg/io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace fg {

using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest form that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    unsigned long long hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", hash);
    return buf;
}

namespace {

json grid_to_json(const Grid& g) {
    json j;
    j["kind"] = g.kind() == GridKind::Interval ? "interval" : "radial_ball";
    j["n"] = g.n();
    j["h"] = g.h();
    if (g.kind() == GridKind::Interval) {
        j["a"] = g.left();
        j["b"] = g.right();
    } else {
        j["radius"] = g.radius();
        j["dim"] = g.dim();
    }
    return j;
}

Grid grid_from_json(const json& j) {
    if (j.at("kind") == "interval")
        return Grid::interval(j.at("a").get<double>(), j.at("b").get<double>(),
                              j.at("n").get<int>());
    return Grid::radial_ball(j.at("radius").get<double>(), j.at("dim").get<int>(),
                             j.at("n").get<int>());
}

json params_to_json(const Params& p) {
    json j;
    j["p"] = p.p;
    j["q"] = p.q;
    j["dim"] = p.dim;
    switch (p.regime()) {
    case Regime::Giant: j["regime"] = "giant"; break;
    case Regime::PLaplacianLimit: j["regime"] = "p_laplacian_limit"; break;
    case Regime::Super: j["regime"] = "super"; break;
    }
    return j;
}

void append_field_rows(std::string& out, const Field& f, const char* prefix) {
    const Grid& g = *f.grid;
    if (g.kind() == GridKind::Interval)
        out += std::string(prefix) + fmt_double(g.left()) + ",0\n";
    for (int i = 0; i < f.n(); ++i) {
        out += prefix;
        out += fmt_double(g.coord(i));
        out += ',';
        out += fmt_double(f.values[i]);
        out += '\n';
    }
    out += std::string(prefix) + fmt_double(g.right()) + ",0\n";
}

} // namespace

std::string field_to_csv(const Field& f, const std::string& header_comment) {
    std::string out;
    if (!header_comment.empty()) out += "# " + header_comment + "\n";
    out += "coord,value\n";
    append_field_rows(out, f, "");
    return out;
}

std::string snapshot_to_json(const Field& f, const Params& params) {
    json j;
    j["params"] = params_to_json(params);
    j["grid"] = grid_to_json(*f.grid);
    j["time"] = f.time;
    j["values"] = f.values;
    return j.dump(2) + "\n";
}

std::pair<Field, Params> snapshot_from_json(const std::string& text) {
    json j = json::parse(text);
    Params p = make_params(j.at("params").at("p").get<double>(),
                           j.at("params").at("q").get<double>(),
                           j.at("params").at("dim").get<int>());
    auto grid = std::make_shared<Grid>(grid_from_json(j.at("grid")));
    Field f(grid, j.at("values").get<std::vector<double>>(), j.at("time").get<double>());
    return {std::move(f), p};
}

std::string trajectory_to_csv(const Trajectory& traj, const std::string& header_comment) {
    std::string out;
    if (!header_comment.empty()) out += "# " + header_comment + "\n";
    out += "time,coord,value\n";
    for (const Field& f : traj.snapshots) {
        const std::string prefix = fmt_double(f.time) + ",";
        append_field_rows(out, f, prefix.c_str());
    }
    return out;
}

std::string trajectory_summary_csv(const Trajectory& traj, const std::string& header_comment) {
    std::string out;
    if (!header_comment.empty()) out += "# " + header_comment + "\n";
    out += "time,sup_norm,lipschitz_estimate,energy\n";
    for (const Field& f : traj.snapshots) {
        out += fmt_double(f.time) + "," + fmt_double(sup_norm(f)) + "," +
               fmt_double(lipschitz_estimate(f)) + "," + fmt_double(integral_abs_pow(f, 2.0)) +
               "\n";
    }
    return out;
}

std::string certification_to_json(const CertificationReport& rep) {
    json j;
    j["kind"] = to_string(rep.kind);
    json c;
    for (const auto& [k, v] : rep.constants) c[k] = v;
    j["constants"] = c;
    j["min_residual"] = rep.min_residual;
    j["tolerance"] = rep.tolerance;
    j["c_cal"] = rep.c_cal;
    j["h"] = rep.h;
    json viols = json::array();
    for (const auto& v : rep.violations)
        viols.push_back({{"time", v.time}, {"node", v.node}, {"residual", v.residual}});
    j["violations"] = viols;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

std::string domination_to_json(const DominationReport& rep) {
    json j;
    j["max_violation"] = rep.max_violation;
    j["tolerance"] = rep.tolerance;
    j["checked"] = rep.checked;
    json viols = json::array();
    for (const auto& v : rep.violations)
        viols.push_back({{"time", v.time}, {"node", v.node}, {"excess", v.residual}});
    j["violations"] = viols;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

std::string profile_header_json(const Profile& prof, double p,
                                const std::map<std::string, std::string>& extra) {
    json j;
    j["p"] = p;
    const Grid& g = *prof.field.grid;
    j["domain"] = grid_to_json(g);
    j["kind"] = prof.kind == ProfileKind::F_withSource ? "f_with_source" : "f0_pure";
    j["sup_norm"] = prof.sup_norm;
    j["grad_sup_norm"] = prof.grad_sup_norm;
    j["lipschitz_const"] = prof.lipschitz_const;
    for (const auto& [k, v] : extra) j[k] = v;
    return j.dump(2) + "\n";
}

const char* event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::BoundaryLoss: return "boundary_loss";
    case EventKind::BlowupGuard: return "blowup_guard";
    case EventKind::SteadyState: return "steady_state";
    }
    return "?";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out << content;
}

} // namespace fg
