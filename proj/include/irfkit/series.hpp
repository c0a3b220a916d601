#ifndef IRFKIT_SERIES_HPP
#define IRFKIT_SERIES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace irfkit {

/// A named univariate time series. Immutable after construction.
///
/// Values must be finite; period labels, when present, are opaque ordered
/// strings. If every label parses as a number the labels must be strictly
/// increasing numerically; otherwise they only need to be unique and their
/// file order defines time.
class Series {
public:
    Series(std::string name, std::vector<double> values,
           std::optional<std::vector<std::string>> periods = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<double>& values() const { return values_; }
    const std::optional<std::vector<std::string>>& periods() const { return periods_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t t) const { return values_[t]; }

    /// Copy with a different name, same data.
    Series renamed(std::string name) const;

    /// Contiguous sub-series [first, first+count).
    Series slice(std::size_t first, std::size_t count) const;

private:
    std::string name_;
    std::vector<double> values_;
    std::optional<std::vector<std::string>> periods_;
};

/// Balanced or unbalanced panel: per-entity series for each named variable.
/// Period indices are aligned within each entity across variables.
class Panel {
public:
    Panel(std::vector<std::string> entities,
          std::map<std::string, std::map<std::string, Series>> data);

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& variables() const { return variables_; }
    bool balanced() const { return balanced_; }

    const Series& at(const std::string& entity, const std::string& variable) const;

private:
    std::vector<std::string> entities_;
    std::vector<std::string> variables_;
    std::map<std::string, std::map<std::string, Series>> data_;  // entity -> var -> series
    bool balanced_ = true;
};

}  // namespace irfkit

#endif
