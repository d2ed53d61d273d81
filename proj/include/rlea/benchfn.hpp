#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlea {

using Vector = Eigen::VectorXd;

/// Identifies a registry entry.
struct FunctionId {
    std::string name;
    std::size_t dimension = 0;

    bool operator==(const FunctionId&) const = default;
    /// "Sphere_10"
    std::string label() const;
};

/// Unshifted BBOB objective (default instance: no rotation, x_opt = 0, f_opt = 0
/// wherever the definition allows it). Immutable and safe to share.
class BenchmarkFunction {
public:
    using Objective = std::function<double(const Vector&)>;

    BenchmarkFunction(std::string name, int bbob_index, std::size_t dimension, Objective objective,
                      double lower = -5.0, double upper = 5.0);

    const std::string& name() const { return name_; }
    int bbob_index() const { return bbob_index_; }
    std::size_t dimension() const { return dimension_; }
    FunctionId id() const { return {name_, dimension_}; }

    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    /// Per-variable upper - lower.
    Vector width() const { return upper_ - lower_; }
    /// Component-wise clip into the box.
    Vector clip(const Vector& x) const;

    /// Throws std::invalid_argument on dimension mismatch. Does not count.
    double operator()(const Vector& x) const;

private:
    std::string name_;
    int bbob_index_;
    std::size_t dimension_;
    Objective objective_;
    Vector lower_;
    Vector upper_;
};

/// Raised when a run asks for more evaluations than it was granted.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

class EvalBudget {
public:
    explicit EvalBudget(std::size_t max_evaluations);

    std::size_t max_evaluations() const { return max_; }
    std::size_t used() const { return used_; }
    std::size_t remaining() const { return max_ - used_; }
    /// Throws BudgetExhausted if no evaluation is left.
    void charge();

private:
    std::size_t max_;
    std::size_t used_ = 0;
};

/// A function paired with the budget of one run. Every call is counted.
class Evaluator {
public:
    Evaluator(const BenchmarkFunction& fn, std::size_t max_evaluations) : fn_(&fn), budget_(max_evaluations) {}

    double operator()(const Vector& x);

    const BenchmarkFunction& function() const { return *fn_; }
    const EvalBudget& budget() const { return budget_; }

private:
    const BenchmarkFunction* fn_;
    EvalBudget budget_;
};

/// The 46 benchmark entries: ten 10-D functions followed by twelve functions at 5, 10 and 20 D.
const std::vector<BenchmarkFunction>& registry();

std::vector<FunctionId> registry_list();

/// Case-insensitive lookup. Throws std::out_of_range when absent.
const BenchmarkFunction& find_function(const std::string& name, std::size_t dimension);
const BenchmarkFunction& find_function(const FunctionId& id);

/// Parses "Sphere_10" or "Sphere:10".
FunctionId parse_function_id(const std::string& text);

} // namespace rlea
