#include "demrisk/lifetable.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace demrisk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (s.empty())
        return false;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string row_error(std::size_t row, const std::string& what) {
    return "row " + std::to_string(row) + ": " + what;
}

} // namespace

LifeTable::LifeTable(std::string name, int min_age, std::vector<double> qx)
    : name_(std::move(name)), min_age_(min_age), qx_(std::move(qx)) {
    if (min_age_ < 0)
        throw LifeTableError("life table '" + name_ + "': negative minimum age");
    if (qx_.empty())
        throw LifeTableError("life table '" + name_ + "': no ages");
    for (std::size_t i = 0; i < qx_.size(); ++i) {
        const double q = qx_[i];
        if (!std::isfinite(q) || q < 0.0 || q > 1.0)
            throw LifeTableError("life table '" + name_ + "': probability out of range at age " +
                                 std::to_string(min_age_ + static_cast<int>(i)));
    }
    if (qx_.back() != 1.0)
        throw LifeTableError("life table '" + name_ + "': terminal age " +
                             std::to_string(terminal_age()) + " must have q = 1");
}

double LifeTable::qx(int age) const {
    if (age < min_age_ || age > terminal_age())
        throw LifeTableError("life table '" + name_ + "': age " + std::to_string(age) +
                             " out of range [" + std::to_string(min_age_) + ", " +
                             std::to_string(terminal_age()) + "]");
    return qx_[static_cast<std::size_t>(age - min_age_)];
}

double LifeTable::npx(int x, int n) const {
    if (n < 0)
        throw LifeTableError("npx: negative duration");
    if (n == 0)
        return 1.0;
    // range check on the last age used even if survival already hit zero
    qx(x + n - 1);
    double p = 1.0;
    for (int h = 0; h < n; ++h)
        p *= 1.0 - qx(x + h);
    return p;
}

double LifeTable::deferred_qx(int x, int h) const {
    if (h < 0)
        throw LifeTableError("deferred_qx: negative deferment");
    return npx(x, h) * qx(x + h);
}

ScalingSchedule::ScalingSchedule(std::map<int, double> multipliers)
    : multipliers_(std::move(multipliers)) {
    for (const auto& [age, m] : multipliers_) {
        if (!(m > 0.0) || !std::isfinite(m))
            throw LifeTableError("scaling multiplier at age " + std::to_string(age) +
                                 " must be positive");
    }
}

ScalingSchedule ScalingSchedule::constant(double factor, int min_age, int max_age) {
    std::map<int, double> m;
    for (int a = min_age; a <= max_age; ++a)
        m[a] = factor;
    return ScalingSchedule(std::move(m));
}

ScalingSchedule ScalingSchedule::linear(const std::vector<std::pair<int, double>>& knots,
                                        int min_age, int max_age) {
    if (knots.empty())
        throw LifeTableError("scaling schedule needs at least one knot");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i].first <= knots[i - 1].first)
            throw LifeTableError("scaling schedule knots must have increasing ages");
    }
    std::map<int, double> m;
    for (int a = min_age; a <= max_age; ++a) {
        if (a <= knots.front().first) {
            m[a] = knots.front().second;
        } else if (a >= knots.back().first) {
            m[a] = knots.back().second;
        } else {
            std::size_t k = 1;
            while (knots[k].first < a)
                ++k;
            const auto [a0, m0] = knots[k - 1];
            const auto [a1, m1] = knots[k];
            const double w = static_cast<double>(a - a0) / static_cast<double>(a1 - a0);
            m[a] = m0 + w * (m1 - m0);
        }
    }
    return ScalingSchedule(std::move(m));
}

ScalingSchedule ScalingSchedule::default_pure_endowment(int min_age, int max_age) {
    return linear({{40, 0.90}, {60, 0.80}}, min_age, max_age);
}

double ScalingSchedule::multiplier(int age) const {
    auto it = multipliers_.find(age);
    if (it == multipliers_.end())
        throw LifeTableError("scaling schedule does not cover age " + std::to_string(age));
    return it->second;
}

LifeTable parse_life_table(const std::string& text, const std::string& name, int min_age) {
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    int first_age = -1;
    int prev_age = -1;
    std::vector<double> qx;
    bool header_allowed = true;

    while (std::getline(in, line)) {
        ++row;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#')
            continue;
        const auto comma = view.find(',');
        if (comma == std::string_view::npos)
            throw LifeTableError(row_error(row, "malformed row, expected 'age,qx'"));
        int age = 0;
        double q = 0.0;
        if (!parse_number(view.substr(0, comma), age)) {
            if (!header_allowed)
                throw LifeTableError(row_error(row, "malformed age"));
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (!parse_number(view.substr(comma + 1), q))
            throw LifeTableError(row_error(row, "malformed probability"));
        if (!std::isfinite(q) || q < 0.0 || q > 1.0)
            throw LifeTableError(row_error(row, "probability out of range"));
        if (prev_age >= 0 && age != prev_age + 1) {
            if (age > prev_age + 1)
                throw LifeTableError(row_error(row, "age gap at " + std::to_string(prev_age + 1)));
            throw LifeTableError(row_error(row, "ages must be strictly increasing"));
        }
        prev_age = age;
        if (min_age >= 0 && age < min_age)
            continue;
        if (first_age < 0)
            first_age = age;
        qx.push_back(q);
    }
    if (qx.empty())
        throw LifeTableError("life table '" + name + "': no rows");
    if (min_age >= 0 && first_age != min_age)
        throw LifeTableError("life table '" + name + "': starts at age " +
                             std::to_string(first_age) + ", requested " + std::to_string(min_age));
    return LifeTable(name, first_age, std::move(qx));
}

LifeTable load_life_table(const std::filesystem::path& path, int min_age) {
    std::ifstream in(path);
    if (!in)
        throw LifeTableError("cannot open life table file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_life_table(buf.str(), path.stem().string(), min_age);
}

LifeTable scale_table(const LifeTable& table, const ScalingSchedule& schedule) {
    std::vector<double> q = table.probabilities();
    const int terminal = table.terminal_age();
    for (int age = table.min_age(); age < terminal; ++age) {
        auto& v = q[static_cast<std::size_t>(age - table.min_age())];
        const double m = schedule.multiplier(age);
        if (m == 1.0)
            continue;
        v *= m;
        if (v > 1.0)
            throw LifeTableError("scaled probability exceeds 1 at age " + std::to_string(age));
    }
    return LifeTable(table.name() + "_scaled", table.min_age(), std::move(q));
}

} // namespace demrisk
