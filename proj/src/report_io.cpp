#include "radial_lab/report_io.hpp"

#include "radial_lab/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace radial {

void write_profile_csv(std::ostream& out, const RadialFunction& u)
{
    const auto du = radial_derivative(u);
    const auto r = u.grid().nodes();
    out << "r,u,du_dr\n";
    char line[96];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r[i], u[i], du[i]);
        out << line;
    }
}

void write_profile_csv(const std::string& path, const RadialFunction& u)
{
    std::ofstream out(path);
    if (!out)
        throw ParameterError("cannot write '" + path + "'");
    write_profile_csv(out, u);
}

Profile read_profile_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || (line != "r,u,du_dr" && line != "r,u,du_dr\r"))
        throw ParameterError("profile CSV must start with the header r,u,du_dr");
    Profile p;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        double cols[3];
        const char* pos = line.data();
        const char* end = pos + line.size();
        for (int c = 0; c < 3; ++c) {
            const auto [ptr, ec] = std::from_chars(pos, end, cols[c]);
            if (ec != std::errc() || (c < 2 && (ptr == end || *ptr != ',')) || (c == 2 && ptr != end))
                throw ParameterError("malformed profile row " + std::to_string(lineno));
            pos = ptr + 1;
        }
        p.r.push_back(cols[0]);
        p.u.push_back(cols[1]);
        p.du_dr.push_back(cols[2]);
    }
    return p;
}

Profile read_profile_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read '" + path + "'");
    return read_profile_csv(in);
}

RadialFunction to_function(const Profile& profile, int dimension)
{
    if (profile.r.size() < 9)
        throw ParameterError("profile has too few rows");
    const int n = static_cast<int>(profile.r.size()) - 1;
    auto grid = build_grid(dimension, n);
    for (std::size_t i = 0; i < profile.r.size(); ++i)
        if (std::abs(profile.r[i] - grid->node(i)) > 1e-14)
            throw ParameterError("profile r column is not the uniform grid i/n");
    return RadialFunction(grid, profile.u);
}

nlohmann::json config_json(const RunConfig& c)
{
    return {
        {"dimension", c.dimension},   {"intervals", c.intervals},     {"f", c.f},
        {"a", c.a},                   {"b", c.b},                     {"tol", c.tol},
        {"max_picard", c.max_picard}, {"max_newton", c.max_newton},   {"seed_value", c.seed_value},
        {"lambda", c.lambda_values},  {"mu", c.mu_values},            {"k", c.eigen_count},
        {"points", c.path_points},    {"max_rounds", c.max_rounds},   {"explore_k", c.explore_k},
        {"p", c.truncation_p},        {"s0_factor", c.s0_factor},     {"suite", c.suite},
        {"samples", c.samples},       {"drifts", c.drifts},           {"multistart", c.multistart},
        {"seed", c.seed},             {"output", c.output},
    };
}

nlohmann::json certificates_json(const CertificateSet& certificates)
{
    auto out = nlohmann::json::array();
    for (const auto& c : certificates.items())
        out.push_back({{"name", c.name},
                       {"measured", c.measured},
                       {"bound", c.bound},
                       {"relation", to_string(c.relation)},
                       {"passed", c.passed},
                       {"note", c.note}});
    return out;
}

nlohmann::json suite_json(const SuiteReport& report)
{
    auto checks = nlohmann::json::array();
    for (const auto& c : report.checks)
        checks.push_back(
            {{"description", c.description}, {"measured", c.measured}, {"bound", c.bound}, {"passed", c.passed}});
    return {{"name", report.name}, {"seed", report.seed}, {"passed", report.passed()}, {"checks", checks}};
}

void write_json(const std::string& path, const nlohmann::json& value)
{
    std::ofstream out(path);
    if (!out)
        throw ParameterError("cannot write '" + path + "'");
    out << value.dump(2) << "\n";
}

}  // namespace radial
