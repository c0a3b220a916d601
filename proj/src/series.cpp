#include "irfkit/series.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "irfkit/errors.hpp"

namespace irfkit {

namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

void check_periods(const std::string& name, std::size_t n,
                   const std::vector<std::string>& periods) {
    if (periods.size() != n)
        throw StructuralError("series '" + name + "': period index length " +
                              std::to_string(periods.size()) + " != value length " +
                              std::to_string(n));
    bool all_numeric = true;
    std::vector<double> as_num(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (!parse_number(periods[i], as_num[i])) {
            all_numeric = false;
            break;
        }
    }
    if (all_numeric) {
        for (std::size_t i = 1; i < as_num.size(); ++i)
            if (!(as_num[i] > as_num[i - 1]))
                throw StructuralError("series '" + name + "': period index not strictly increasing at position " +
                                      std::to_string(i) + " ('" + periods[i] + "')");
    } else {
        std::set<std::string> seen;
        for (const auto& p : periods)
            if (!seen.insert(p).second)
                throw StructuralError("series '" + name + "': duplicate period label '" + p + "'");
    }
}

}  // namespace

Series::Series(std::string name, std::vector<double> values,
               std::optional<std::vector<std::string>> periods)
    : name_(std::move(name)), values_(std::move(values)), periods_(std::move(periods)) {
    if (values_.empty())
        throw StructuralError("series '" + name_ + "': empty");
    for (std::size_t t = 0; t < values_.size(); ++t)
        if (!std::isfinite(values_[t]))
            throw StructuralError("series '" + name_ + "': non-finite value at position " +
                                  std::to_string(t));
    if (periods_) check_periods(name_, values_.size(), *periods_);
}

Series Series::renamed(std::string name) const {
    return Series(std::move(name), values_, periods_);
}

Series Series::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size())
        throw ParameterError("series '" + name_ + "': slice out of range");
    std::vector<double> v(values_.begin() + first, values_.begin() + first + count);
    std::optional<std::vector<std::string>> p;
    if (periods_)
        p = std::vector<std::string>(periods_->begin() + first, periods_->begin() + first + count);
    return Series(name_, std::move(v), std::move(p));
}

Panel::Panel(std::vector<std::string> entities,
             std::map<std::string, std::map<std::string, Series>> data)
    : entities_(std::move(entities)), data_(std::move(data)) {
    if (entities_.size() < 2)
        throw StructuralError("panel: needs at least 2 entities, got " +
                              std::to_string(entities_.size()));
    for (const auto& e : entities_) {
        auto it = data_.find(e);
        if (it == data_.end() || it->second.empty())
            throw StructuralError("panel: entity '" + e + "' has no data");
        const std::optional<std::vector<std::string>>* ref_periods = nullptr;
        std::size_t ref_len = 0;
        for (const auto& [var, s] : it->second) {
            if (variables_.empty() || entities_.front() == e) {
                // variable set taken from the first entity
            }
            if (!ref_periods) {
                ref_periods = &s.periods();
                ref_len = s.size();
            } else {
                if (s.size() != ref_len || s.periods() != *ref_periods)
                    throw StructuralError("panel: entity '" + e + "' variable '" + var +
                                          "' misaligned with the entity's other variables");
            }
        }
        if (ref_len < 3)
            throw StructuralError("panel: entity '" + e + "' has fewer than 3 periods");
    }
    for (const auto& [var, s] : data_.at(entities_.front())) variables_.push_back(var);
    for (const auto& e : entities_)
        for (const auto& v : variables_)
            if (data_.at(e).find(v) == data_.at(e).end())
                throw StructuralError("panel: entity '" + e + "' missing variable '" + v + "'");

    const Series& first = data_.at(entities_.front()).at(variables_.front());
    for (const auto& e : entities_) {
        const Series& s = data_.at(e).at(variables_.front());
        if (s.size() != first.size() || s.periods() != first.periods()) {
            balanced_ = false;
            break;
        }
    }
}

const Series& Panel::at(const std::string& entity, const std::string& variable) const {
    auto e = data_.find(entity);
    if (e == data_.end()) throw ParameterError("panel: unknown entity '" + entity + "'");
    auto v = e->second.find(variable);
    if (v == e->second.end())
        throw ParameterError("panel: unknown variable '" + variable + "' for entity '" + entity + "'");
    return v->second;
}

}  // namespace irfkit
