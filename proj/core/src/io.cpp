#include "meissner/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace meissner {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

template <typename Body>
void write_rows(std::ostream& os, Placement p, int axis, const std::array<int, 3>& shape,
                Body&& value_at) {
    for (int i = 0; i < shape[0]; ++i)
        for (int j = 0; j < shape[1]; ++j)
            for (int k = 0; k < shape[2]; ++k)
                os << to_string(p) << ',' << axis << ',' << i << ',' << j << ',' << k << ','
                   << format_double(value_at(i, j, k)) << '\n';
}

struct CsvRow {
    std::string placement;
    int axis, i, j, k;
    double value;
};

bool parse_row(const std::string& line, CsvRow& row) {
    std::stringstream ss(line);
    std::string tok;
    if (!std::getline(ss, row.placement, ',')) return false;
    auto next_int = [&](int& out) {
        if (!std::getline(ss, tok, ',')) return false;
        out = std::stoi(tok);
        return true;
    };
    if (!next_int(row.axis) || !next_int(row.i) || !next_int(row.j) || !next_int(row.k))
        return false;
    if (!std::getline(ss, tok, ',')) return false;
    row.value = std::stod(tok);
    return true;
}

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& f) {
    os << "placement,axis,i,j,k,value\n";
    write_rows(os, f.placement(), -1, f.shape(), [&](int i, int j, int k) { return f.at(i, j, k); });
}

void write_field_csv(std::ostream& os, const VectorField& f) {
    os << "placement,axis,i,j,k,value\n";
    for (int d = 0; d < f.n_comps(); ++d)
        write_rows(os, f.placement(), d, f.shape(d),
                   [&](int i, int j, int k) { return f.at(d, i, j, k); });
}

ScalarField read_scalar_field_csv(std::istream& is, const StaggeredGrid& grid,
                                  Placement placement) {
    ScalarField out(grid, placement);
    std::string line;
    std::getline(is, line);  // header
    CsvRow row;
    std::size_t filled = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        require(parse_row(line, row), ErrorKind::IoFailure, "malformed field CSV row");
        require(row.placement == to_string(placement) && row.axis == -1, ErrorKind::IoFailure,
                "field CSV placement mismatch");
        out.at(row.i, row.j, row.k) = row.value;
        ++filled;
    }
    require(filled == out.size(), ErrorKind::IoFailure, "field CSV row count mismatch");
    return out;
}

VectorField read_vector_field_csv(std::istream& is, const StaggeredGrid& grid,
                                  Placement placement) {
    VectorField out(grid, placement);
    std::string line;
    std::getline(is, line);
    CsvRow row;
    std::size_t filled = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        require(parse_row(line, row), ErrorKind::IoFailure, "malformed field CSV row");
        require(row.placement == to_string(placement) && row.axis >= 0 &&
                    row.axis < out.n_comps(),
                ErrorKind::IoFailure, "field CSV placement mismatch");
        out.at(row.axis, row.i, row.j, row.k) = row.value;
        ++filled;
    }
    require(filled == out.size(), ErrorKind::IoFailure, "field CSV row count mismatch");
    return out;
}

void write_coeffs_csv(std::ostream& os, const SphericalHarmonicCoeffs& c) {
    os << "l,m,basis,value\n";
    auto dump = [&](const char* name, const std::vector<double>& v, int l_lo) {
        for (int l = l_lo; l <= c.l_max; ++l)
            for (int m = -l; m <= l; ++m)
                os << l << ',' << m << ',' << name << ',' << format_double(v[sph_index(l, m)])
                   << '\n';
    };
    dump("Y", c.y, 0);
    dump("GRAD_S", c.grad_s, 1);
    dump("CROSS", c.cross, 1);
}

void write_slab_profile_csv(std::ostream& os, const SlabSolution& sol) {
    os << "x,f,a,fp,ap\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i)
        os << format_double(sol.x[i]) << ',' << format_double(sol.f[i]) << ','
           << format_double(sol.a[i]) << ',' << format_double(sol.fp[i]) << ','
           << format_double(sol.ap[i]) << '\n';
}

std::string slab_summary_json(const SlabSolution& sol, double b) {
    nlohmann::json j;
    j["b"] = b;
    j["a0"] = sol.a0;
    j["margin_wall"] = sol.margin_wall;
    j["first_integral_residual"] = sol.first_integral_residual;
    return j.dump(2) + "\n";
}

std::string state_sidecar_json(const MeissnerStateFH& state) {
    nlohmann::json j;
    j["params"]["lambda"] = state.params.lambda;
    j["params"]["kappa"] =
        state.params.kappa_finite() ? nlohmann::json(state.params.kappa) : nlohmann::json("inf");
    j["params"]["mu"] = state.params.mu;
    j["data"]["sup_norm"] = state.data.sup_norm();
    j["data"]["l1_norm"] = state.data.l1_norm();
    j["report"]["iterations"] = state.report.iterations;
    j["report"]["final_residual"] = state.report.final_residual;
    j["report"]["margin"] = state.report.margin;
    j["report"]["curl_bound"] = state.report.curl_bound;
    j["report"]["sup_A"] = state.report.sup_A;
    j["report"]["converged"] = state.report.converged;
    j["report"]["linear_iterations"] = state.report.linear_iterations;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), ErrorKind::IoFailure, "cannot open " + path);
    os << content;
    require(os.good(), ErrorKind::IoFailure, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), ErrorKind::IoFailure, "cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace meissner
