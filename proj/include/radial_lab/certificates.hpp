#pragma once

#include <string>
#include <vector>

namespace radial {

/// One numerical check: a measured value compared against a bound.
struct Certificate {
    enum class Relation { AtMost, AtLeast, Flag, Excluded };

    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    Relation relation = Relation::Flag;
    bool passed = false;
    std::string note;

    static Certificate at_most(std::string name, double measured, double bound, std::string note = {});
    static Certificate at_least(std::string name, double measured, double bound, std::string note = {});
    static Certificate flag(std::string name, bool ok, std::string note = {});
    /// Not evaluated (out of scope or inapplicable); never counts as a failure.
    static Certificate excluded(std::string name, std::string reason);
};

const char* to_string(Certificate::Relation relation);

class CertificateSet {
public:
    void add(Certificate c) { items_.push_back(std::move(c)); }
    void append(const CertificateSet& other);

    bool all_passed() const;
    std::size_t failures() const;
    const std::vector<Certificate>& items() const noexcept { return items_; }
    /// nullptr when absent.
    const Certificate* find(const std::string& name) const;
    bool empty() const noexcept { return items_.empty(); }

private:
    std::vector<Certificate> items_;
};

}  // namespace radial
