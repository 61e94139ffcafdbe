#ifndef DEMRISK_LIFETABLE_HPP
#define DEMRISK_LIFETABLE_HPP

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace demrisk {

class LifeTableError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Annual death probabilities for contiguous integer ages min_age..terminal_age.
// The last entry is the terminal age and always has q = 1.
class LifeTable {
  public:
    LifeTable(std::string name, int min_age, std::vector<double> qx);

    const std::string& name() const { return name_; }
    int min_age() const { return min_age_; }
    int terminal_age() const { return min_age_ + static_cast<int>(qx_.size()) - 1; }
    std::size_t size() const { return qx_.size(); }
    const std::vector<double>& probabilities() const { return qx_; }

    double qx(int age) const;
    double px(int age) const { return 1.0 - qx(age); }

    // n-year survival probability from age x.
    double npx(int x, int n) const;

    // Probability of surviving h years from x and then dying in the following year.
    double deferred_qx(int x, int h) const;

  private:
    std::string name_;
    int min_age_;
    std::vector<double> qx_;
};

// Age-dependent multipliers applied to death probabilities.
class ScalingSchedule {
  public:
    ScalingSchedule() = default;
    explicit ScalingSchedule(std::map<int, double> multipliers);

    static ScalingSchedule constant(double factor, int min_age, int max_age);

    // Piecewise-linear in age through the given knots, flat beyond the ends.
    static ScalingSchedule linear(const std::vector<std::pair<int, double>>& knots, int min_age,
                                  int max_age);

    // 0.90 at age 40 falling linearly to 0.80 at age 60.
    static ScalingSchedule default_pure_endowment(int min_age, int max_age);

    double multiplier(int age) const;
    bool covers(int age) const { return multipliers_.count(age) != 0; }

  private:
    std::map<int, double> multipliers_;
};

// Reads `age,qx` rows. A header line is allowed if its first field is not numeric.
LifeTable load_life_table(const std::filesystem::path& path, int min_age = -1);

LifeTable parse_life_table(const std::string& text, const std::string& name, int min_age = -1);

LifeTable scale_table(const LifeTable& table, const ScalingSchedule& schedule);

} // namespace demrisk

#endif
