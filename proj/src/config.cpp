#include "radial_lab/config.hpp"

#include "radial_lab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace radial {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ParameterError("'" + key + "' expects a number, got '" + value + "'");
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value)
{
    Int out = 0;
    const char* first = value.data();
    const char* last = first + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ParameterError("'" + key + "' expects an integer, got '" + value + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    if (trim(value).empty())
        return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    return out;
}

std::string from_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? "," : "") + fmt(values[i]);
    return out;
}

struct Field {
    std::function<void(RunConfig&, const std::string&, const std::string&)> read;
    std::function<std::string(const RunConfig&)> write;
};

#define RL_INT(member)                                                                                           \
    Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_int<int>(k, v); },        \
          [](const RunConfig& c) { return std::to_string(c.member); }}
#define RL_DOUBLE(member)                                                                                        \
    Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); },          \
          [](const RunConfig& c) { return fmt(c.member); }}
#define RL_STRING(member)                                                                                        \
    Field{[](RunConfig& c, const std::string&, const std::string& v) { c.member = v; },                         \
          [](const RunConfig& c) { return c.member; }}
#define RL_LIST(member)                                                                                          \
    Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_list(k, v); },            \
          [](const RunConfig& c) { return from_list(c.member); }}

using Schema = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>;

const Schema& schema()
{
    static const Schema s{
        {"grid", {{"dimension", RL_INT(dimension)}, {"intervals", RL_INT(intervals)}}},
        {"problem", {{"f", RL_STRING(f)}, {"a", RL_STRING(a)}, {"b", RL_STRING(b)}}},
        {"solve",
         {{"tol", RL_DOUBLE(tol)},
          {"max_picard", RL_INT(max_picard)},
          {"max_newton", RL_INT(max_newton)},
          {"seed_value", RL_DOUBLE(seed_value)}}},
        {"homotopy", {{"lambda", RL_LIST(lambda_values)}, {"mu", RL_LIST(mu_values)}}},
        {"eigen", {{"k", RL_INT(eigen_count)}}},
        {"mountain-pass",
         {{"points", RL_INT(path_points)},
          {"max_rounds", RL_INT(max_rounds)},
          {"explore_k", RL_INT(explore_k)},
          {"p", RL_DOUBLE(truncation_p)},
          {"s0_factor", RL_DOUBLE(s0_factor)}}},
        {"verify",
         {{"suite", RL_STRING(suite)},
          {"samples", RL_INT(samples)},
          {"drifts", RL_INT(drifts)},
          {"multistart", RL_INT(multistart)}}},
        {"run",
         {{"seed",
           Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_int<std::uint64_t>(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }}},
          {"output", RL_STRING(output)}}},
    };
    return s;
}

#undef RL_INT
#undef RL_DOUBLE
#undef RL_STRING
#undef RL_LIST

const Field* find_field(const std::string& section, const std::string& key)
{
    for (const auto& [name, fields] : schema()) {
        if (name != section)
            continue;
        for (const auto& [k, field] : fields)
            if (k == key)
                return &field;
        throw ParameterError("unknown key '" + key + "' in section [" + section + "]");
    }
    throw ParameterError("unknown section [" + section + "]");
}

}  // namespace

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParameterError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (std::none_of(schema().begin(), schema().end(), [&](const auto& e) { return e.first == section; }))
                throw ParameterError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParameterError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ParameterError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        find_field(section, key)->read(base, key, value);
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string format_config(const RunConfig& config)
{
    std::string out;
    for (const auto& [section, fields] : schema()) {
        if (!out.empty())
            out += "\n";
        out += "[" + section + "]\n";
        for (const auto& [key, field] : fields)
            out += key + " = " + field.write(config) + "\n";
    }
    return out;
}

void check_config(const RunConfig& c)
{
    if (c.dimension < 2)
        throw ParameterError("dimension must be at least 2");
    if (c.intervals < 8)
        throw ParameterError("intervals must be at least 8");
    if (!(c.tol > 0.0))
        throw ParameterError("tol must be positive");
    if (c.max_picard < 0 || c.max_newton < 0)
        throw ParameterError("iteration limits must be nonnegative");
    if (c.seed_value < 0.0)
        throw ParameterError("seed_value must be nonnegative");
    if (c.eigen_count < 1 || c.eigen_count > 6)
        throw ParameterError("k must be in 1..6");
    if (c.path_points < 17 || c.path_points % 2 == 0)
        throw ParameterError("points must be odd and at least 17");
    if (c.max_rounds < 1)
        throw ParameterError("max_rounds must be positive");
    if (c.explore_k < 2 || c.explore_k > 6)
        throw ParameterError("explore_k must be in 2..6");
    if (!(c.truncation_p > 1.0))
        throw ParameterError("p must exceed 1");
    if (!(c.s0_factor > 1.0))
        throw ParameterError("s0_factor must exceed 1");
    if (c.samples < 1 || c.drifts < 1 || c.multistart < 1)
        throw ParameterError("verify counts must be positive");
}

std::vector<double> parse_polynomial(const std::string& text)
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s += ch;
    if (s.empty())
        throw ParameterError("empty coefficient expression");

    std::vector<double> coeffs(1, 0.0);
    std::size_t i = 0;
    const auto fail = [&](const std::string& why) {
        throw ParameterError("cannot parse '" + text + "': " + why);
    };
    const auto read_number = [&](double& out) {
        const char* first = s.data() + i;
        const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
        if (ec != std::errc())
            return false;
        i += static_cast<std::size_t>(ptr - first);
        return true;
    };

    bool first_term = true;
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (!first_term) {
            fail("expected '+' or '-' at position " + std::to_string(i));
        }
        first_term = false;

        double coef = 1.0;
        bool have_number = false;
        if (i < s.size() && s[i] != 'r') {
            if (!read_number(coef))
                fail("expected a number at position " + std::to_string(i));
            have_number = true;
            if (i < s.size() && s[i] == '*')
                ++i;
        }
        int power = 0;
        if (i < s.size() && s[i] == 'r') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                const char* first = s.data() + i;
                const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), power);
                if (ec != std::errc() || power < 0 || power > 32)
                    fail("bad exponent");
                i += static_cast<std::size_t>(ptr - first);
            }
        } else if (!have_number) {
            fail("empty term");
        } else if (i > 0 && s[i - 1] == '*') {
            fail("dangling '*'");
        }
        if (coeffs.size() <= static_cast<std::size_t>(power))
            coeffs.resize(static_cast<std::size_t>(power) + 1, 0.0);
        coeffs[static_cast<std::size_t>(power)] += sign * coef;
    }
    for (double c : coeffs)
        if (!std::isfinite(c))
            fail("non-finite coefficient");
    return coeffs;
}

double evaluate_polynomial(const std::vector<double>& coefficients, double r)
{
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = acc * r + *it;
    return acc;
}

WeightSpec make_weight(const std::string& text)
{
    const auto c = parse_polynomial(text);
    if (std::all_of(c.begin() + 1, c.end(), [](double x) { return x == 0.0; }))
        return WeightSpec::constant(c.front());
    return WeightSpec([c](double r) { return evaluate_polynomial(c, r); }, text);
}

DriftSpec make_drift(const std::string& text)
{
    const auto c = parse_polynomial(text);
    if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; }))
        return DriftSpec::zero();
    return DriftSpec([c](double r) { return evaluate_polynomial(c, r); }, text);
}

}  // namespace radial
