#include "radial_lab/certificates.hpp"

#include <algorithm>
#include <cmath>

namespace radial {

Certificate Certificate::at_most(std::string name, double measured, double bound, std::string note)
{
    const bool ok = std::isfinite(measured) && measured <= bound;
    return Certificate{std::move(name), measured, bound, Relation::AtMost, ok, std::move(note)};
}

Certificate Certificate::at_least(std::string name, double measured, double bound, std::string note)
{
    const bool ok = std::isfinite(measured) && measured >= bound;
    return Certificate{std::move(name), measured, bound, Relation::AtLeast, ok, std::move(note)};
}

Certificate Certificate::flag(std::string name, bool ok, std::string note)
{
    return Certificate{std::move(name), ok ? 1.0 : 0.0, 1.0, Relation::Flag, ok, std::move(note)};
}

Certificate Certificate::excluded(std::string name, std::string reason)
{
    return Certificate{std::move(name), 0.0, 0.0, Relation::Excluded, true, std::move(reason)};
}

const char* to_string(Certificate::Relation relation)
{
    switch (relation) {
    case Certificate::Relation::AtMost:
        return "<=";
    case Certificate::Relation::AtLeast:
        return ">=";
    case Certificate::Relation::Flag:
        return "flag";
    case Certificate::Relation::Excluded:
        return "excluded";
    }
    return "?";
}

void CertificateSet::append(const CertificateSet& other)
{
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool CertificateSet::all_passed() const
{
    return std::all_of(items_.begin(), items_.end(), [](const Certificate& c) { return c.passed; });
}

std::size_t CertificateSet::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(), [](const Certificate& c) { return !c.passed; }));
}

const Certificate* CertificateSet::find(const std::string& name) const
{
    auto it = std::find_if(items_.begin(), items_.end(), [&](const Certificate& c) { return c.name == name; });
    return it == items_.end() ? nullptr : &*it;
}

}  // namespace radial
