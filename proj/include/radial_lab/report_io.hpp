#pragma once

#include "radial_lab/certificates.hpp"
#include "radial_lab/config.hpp"
#include "radial_lab/geometry.hpp"
#include "radial_lab/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace radial {

/// Header "r,u,du_dr", one row per node, 17 significant digits.
void write_profile_csv(std::ostream& out, const RadialFunction& u);
void write_profile_csv(const std::string& path, const RadialFunction& u);

struct Profile {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du_dr;
};

/// Throws ParameterError on a missing header or malformed rows.
Profile read_profile_csv(std::istream& in);
Profile read_profile_csv(const std::string& path);

/// Rebuilds the nodal function on a fresh uniform grid; throws ParameterError
/// if the r column does not match i / n.
RadialFunction to_function(const Profile& profile, int dimension);

nlohmann::json config_json(const RunConfig& config);
nlohmann::json certificates_json(const CertificateSet& certificates);
nlohmann::json suite_json(const SuiteReport& report);

/// Pretty-printed with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& value);

}  // namespace radial
