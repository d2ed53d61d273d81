#include <rlea/benchfn.hpp>
#include <rlea/rng.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rlea {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exponent ratio (i - 1) / (D - 1) with 0-based i.
double ratio(std::size_t i, std::size_t dim) {
    return dim > 1 ? static_cast<double>(i) / static_cast<double>(dim - 1) : 1.0;
}

double tosz(double x) {
    if (x == 0.0)
        return 0.0;
    const double xh = std::log(std::abs(x));
    const double c1 = x > 0 ? 10.0 : 5.5;
    const double c2 = x > 0 ? 7.9 : 3.1;
    return std::copysign(std::exp(xh + 0.049 * (std::sin(c1 * xh) + std::sin(c2 * xh))), x);
}

Vector tosz(const Vector& x) { return x.unaryExpr([](double v) { return tosz(v); }); }

Vector tasy(const Vector& x, double beta) {
    Vector out = x;
    const auto d = static_cast<std::size_t>(x.size());
    for (std::size_t i = 0; i < d; ++i)
        if (x[i] > 0)
            out[i] = std::pow(x[i], 1.0 + beta * ratio(i, d) * std::sqrt(x[i]));
    return out;
}

// Diagonal of the conditioning matrix with condition number alpha.
Vector conditioning(double alpha, std::size_t dim) {
    Vector diag(dim);
    for (std::size_t i = 0; i < dim; ++i)
        diag[i] = std::pow(alpha, 0.5 * ratio(i, dim));
    return diag;
}

double boundary_penalty(const Vector& x) {
    double sum = 0.0;
    for (double v : x) {
        const double excess = std::max(0.0, std::abs(v) - 5.0);
        sum += excess * excess;
    }
    return sum;
}

double rastrigin_core(const Vector& z) {
    double cos_sum = 0.0;
    for (double v : z)
        cos_sum += std::cos(kTwoPi * v);
    return 10.0 * (static_cast<double>(z.size()) - cos_sum) + z.squaredNorm();
}

double rosenbrock_core(const Vector& z) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double rosenbrock_scale(std::size_t dim) { return std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0); }

double schaffers_core(const Vector& z) {
    const auto d = z.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double root = std::sqrt(s);
        const double sn = std::sin(50.0 * std::pow(s, 0.2));
        sum += root + root * sn * sn;
    }
    const double mean = sum / static_cast<double>(d - 1);
    return mean * mean;
}

BenchmarkFunction::Objective sphere() {
    return [](const Vector& x) { return x.squaredNorm(); };
}

BenchmarkFunction::Objective ellipsoid(std::size_t dim) {
    Vector scale(dim);
    for (std::size_t i = 0; i < dim; ++i)
        scale[i] = std::pow(10.0, 6.0 * ratio(i, dim));
    return [scale](const Vector& x) { return scale.dot(tosz(x).cwiseAbs2()); };
}

BenchmarkFunction::Objective rastrigin(std::size_t dim) {
    const Vector lambda = conditioning(10.0, dim);
    return [lambda](const Vector& x) { return rastrigin_core(lambda.cwiseProduct(tasy(tosz(x), 0.2))); };
}

BenchmarkFunction::Objective bueche_rastrigin(std::size_t dim) {
    const Vector base = conditioning(10.0, dim);
    return [base](const Vector& x) {
        Vector z = tosz(x);
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            // Odd 1-based positions get the extra factor 10 when positive.
            const double s = (z[i] > 0 && i % 2 == 0) ? 10.0 * base[i] : base[i];
            z[i] *= s;
        }
        return rastrigin_core(z) + 100.0 * boundary_penalty(x);
    };
}

BenchmarkFunction::Objective linear_slope(std::size_t dim) {
    constexpr double x_opt = 5.0;
    Vector slope(dim);
    for (std::size_t i = 0; i < dim; ++i)
        slope[i] = std::pow(10.0, ratio(i, dim));
    return [slope](const Vector& x) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double z = x_opt * x[i] < x_opt * x_opt ? x[i] : x_opt;
            sum += 5.0 * std::abs(slope[i]) - slope[i] * z;
        }
        return sum;
    };
}

BenchmarkFunction::Objective attractive_sector(std::size_t dim) {
    // With x_opt = 0 no coordinate lies in the penalized half-space, so s_i = 1.
    const Vector lambda = conditioning(10.0, dim);
    return [lambda](const Vector& x) {
        const Vector z = lambda.cwiseProduct(x);
        return std::pow(tosz(z.squaredNorm()), 0.9);
    };
}

BenchmarkFunction::Objective step_ellipsoid(std::size_t dim) {
    const Vector lambda = conditioning(10.0, dim);
    Vector scale(dim);
    for (std::size_t i = 0; i < dim; ++i)
        scale[i] = std::pow(10.0, 2.0 * ratio(i, dim));
    return [lambda, scale](const Vector& x) {
        const Vector zhat = lambda.cwiseProduct(x);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < zhat.size(); ++i) {
            const double v = zhat[i];
            const double rounded = std::abs(v) > 0.5 ? std::floor(0.5 + v) : std::floor(0.5 + 10.0 * v) / 10.0;
            sum += scale[i] * rounded * rounded;
        }
        return 0.1 * std::max(std::abs(zhat[0]) / 1e4, sum) + boundary_penalty(x);
    };
}

BenchmarkFunction::Objective rosenbrock(std::size_t dim, double offset) {
    const double scale = rosenbrock_scale(dim);
    return [scale, offset](const Vector& x) { return rosenbrock_core((scale * x).array() + offset); };
}

BenchmarkFunction::Objective discus() {
    return [](const Vector& x) {
        const Vector z = tosz(x);
        return 1e6 * z[0] * z[0] + z.tail(z.size() - 1).squaredNorm();
    };
}

BenchmarkFunction::Objective bent_cigar() {
    return [](const Vector& x) {
        const Vector z = tasy(x, 0.5);
        return z[0] * z[0] + 1e6 * z.tail(z.size() - 1).squaredNorm();
    };
}

BenchmarkFunction::Objective sharp_ridge(std::size_t dim) {
    const Vector lambda = conditioning(10.0, dim);
    return [lambda](const Vector& x) {
        const Vector z = lambda.cwiseProduct(x);
        return z[0] * z[0] + 100.0 * z.tail(z.size() - 1).norm();
    };
}

BenchmarkFunction::Objective different_powers(std::size_t dim) {
    Vector power(dim);
    for (std::size_t i = 0; i < dim; ++i)
        power[i] = 2.0 + 4.0 * ratio(i, dim);
    return [power](const Vector& x) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            sum += std::pow(std::abs(x[i]), power[i]);
        return std::sqrt(sum);
    };
}

BenchmarkFunction::Objective weierstrass(std::size_t dim) {
    const Vector lambda = conditioning(0.01, dim);
    double f0 = 0.0;
    for (int k = 0; k < 12; ++k)
        f0 += std::pow(0.5, k) * std::cos(std::numbers::pi * std::pow(3.0, k));
    return [lambda, f0](const Vector& x) {
        const Vector z = lambda.cwiseProduct(tosz(x));
        const auto d = static_cast<double>(z.size());
        double sum = 0.0;
        for (double v : z)
            for (int k = 0; k < 12; ++k)
                sum += std::pow(0.5, k) * std::cos(kTwoPi * std::pow(3.0, k) * (v + 0.5));
        const double inner = sum / d - f0;
        return 10.0 * inner * inner * inner + 10.0 / d * boundary_penalty(x);
    };
}

BenchmarkFunction::Objective schaffers(std::size_t dim, double condition) {
    const Vector lambda = conditioning(condition, dim);
    return [lambda](const Vector& x) {
        return schaffers_core(lambda.cwiseProduct(tasy(x, 0.5))) + 10.0 * boundary_penalty(x);
    };
}

BenchmarkFunction::Objective composite_griewank_rosenbrock(std::size_t dim) {
    const double scale = rosenbrock_scale(dim);
    return [scale](const Vector& x) {
        const Vector z = (scale * x).array() + 0.5;
        const auto d = z.size();
        double sum = 0.0;
        for (Eigen::Index i = 0; i + 1 < d; ++i) {
            const double a = z[i] * z[i] - z[i + 1];
            const double b = z[i] - 1.0;
            const double s = 100.0 * a * a + b * b;
            sum += s / 4000.0 - std::cos(s);
        }
        return 10.0 * sum / static_cast<double>(d - 1) + 10.0;
    };
}

BenchmarkFunction::Objective schwefel(std::size_t dim) {
    constexpr double x_opt = 4.2096874633 / 2.0;
    const Vector lambda = conditioning(10.0, dim);
    return [lambda](const Vector& x) {
        const Vector xhat = 2.0 * x;
        Vector zhat = xhat;
        for (Eigen::Index i = 1; i < xhat.size(); ++i)
            zhat[i] = xhat[i] + 0.25 * (xhat[i - 1] - 2.0 * x_opt);
        const Vector shifted = (zhat.array() - 2.0 * x_opt).matrix();
        const Vector z = 100.0 * (lambda.cwiseProduct(shifted).array() + 2.0 * x_opt).matrix();
        double sum = 0.0;
        for (double v : z)
            sum += v * std::sin(std::sqrt(std::abs(v)));
        const auto d = static_cast<double>(z.size());
        return -sum / (100.0 * d) + 4.189828872724339 + 100.0 * boundary_penalty(z / 100.0);
    };
}

BenchmarkFunction::Objective gallagher(std::size_t dim, std::size_t peaks, double first_condition,
                                       double peak_range, std::uint64_t seed) {
    // Peak layout is fixed per (peaks, dim). The global peak sits at the origin.
    Rng rng = make_rng(seed, dim);
    std::vector<Vector> centers(peaks, Vector::Zero(dim));
    std::vector<Vector> precisions(peaks);
    std::vector<double> weights(peaks);

    std::vector<double> alphas(peaks - 1);
    for (std::size_t j = 0; j + 1 < peaks; ++j)
        alphas[j] = std::pow(1000.0, 2.0 * static_cast<double>(j) / static_cast<double>(peaks - 2));
    for (std::size_t j = alphas.size(); j > 1; --j)
        std::swap(alphas[j - 1], alphas[uniform_index(rng, j)]);

    for (std::size_t p = 0; p < peaks; ++p) {
        const double alpha = p == 0 ? first_condition : alphas[p - 1];
        weights[p] = p == 0 ? 10.0 : 1.1 + 8.0 * static_cast<double>(p - 1) / static_cast<double>(peaks - 2);
        if (p > 0)
            for (std::size_t j = 0; j < dim; ++j)
                centers[p][j] = uniform(rng, -peak_range, peak_range);
        Vector diag = conditioning(alpha, dim) / std::pow(alpha, 0.25);
        for (std::size_t j = dim; j > 1; --j)
            std::swap(diag[j - 1], diag[uniform_index(rng, j)]);
        precisions[p] = diag;
    }

    return [centers, precisions, weights](const Vector& x) {
        const auto d = static_cast<double>(x.size());
        double best = 0.0;
        for (std::size_t p = 0; p < centers.size(); ++p) {
            const double q = precisions[p].dot((x - centers[p]).cwiseAbs2());
            best = std::max(best, weights[p] * std::exp(-q / (2.0 * d)));
        }
        const double t = tosz(10.0 - best);
        return t * t + boundary_penalty(x);
    };
}

BenchmarkFunction::Objective katsuura(std::size_t dim) {
    const Vector lambda = conditioning(100.0, dim);
    return [lambda](const Vector& x) {
        const Vector z = lambda.cwiseProduct(x);
        const auto d = static_cast<double>(z.size());
        const double exponent = 10.0 / std::pow(d, 1.2);
        double product = 1.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            double sum = 0.0;
            for (int j = 1; j <= 32; ++j) {
                const double p = std::ldexp(1.0, j);
                sum += std::abs(p * z[i] - std::nearbyint(p * z[i])) / p;
            }
            product *= std::pow(1.0 + static_cast<double>(i + 1) * sum, exponent);
        }
        const double scale = 10.0 / (d * d);
        return scale * product - scale + boundary_penalty(x);
    };
}

BenchmarkFunction::Objective lunacek_bi_rastrigin(std::size_t dim) {
    constexpr double mu0 = 2.5;
    constexpr double dd = 1.0;
    const auto d = static_cast<double>(dim);
    const double s = 1.0 - 1.0 / (2.0 * std::sqrt(d + 20.0) - 8.2);
    const double mu1 = -std::sqrt((mu0 * mu0 - dd) / s);
    const Vector lambda = conditioning(100.0, dim);
    return [=](const Vector& x) {
        const Vector xhat = 2.0 * x;
        const double first = (xhat.array() - mu0).square().sum();
        const double second = dd * d + s * (xhat.array() - mu1).square().sum();
        const Vector z = lambda.cwiseProduct((xhat.array() - mu0).matrix());
        double cos_sum = 0.0;
        for (double v : z)
            cos_sum += std::cos(kTwoPi * v);
        return std::min(first, second) + 10.0 * (d - cos_sum) + 1e4 * boundary_penalty(x);
    };
}

std::vector<BenchmarkFunction> build_registry() {
    std::vector<BenchmarkFunction> out;
    out.reserve(46);
    constexpr std::size_t ten = 10;
    out.emplace_back("BentCigar", 12, ten, bent_cigar());
    out.emplace_back("Discus", 11, ten, discus());
    out.emplace_back("Ellipsoid", 10, ten, ellipsoid(ten));
    out.emplace_back("Katsuura", 23, ten, katsuura(ten));
    out.emplace_back("Rastrigin", 15, ten, rastrigin(ten));
    out.emplace_back("Rosenbrock", 8, ten, rosenbrock(ten, 1.0));
    out.emplace_back("Schaffers", 17, ten, schaffers(ten, 10.0));
    out.emplace_back("Schwefel", 20, ten, schwefel(ten));
    out.emplace_back("Sphere", 1, ten, sphere());
    out.emplace_back("Weierstrass", 16, ten, weierstrass(ten));

    for (std::size_t d : {std::size_t{5}, std::size_t{10}, std::size_t{20}}) {
        out.emplace_back("AttractiveSector", 6, d, attractive_sector(d));
        out.emplace_back("BuecheRastrigin", 4, d, bueche_rastrigin(d));
        out.emplace_back("CompositeGR", 19, d, composite_griewank_rosenbrock(d));
        out.emplace_back("DifferentPowers", 14, d, different_powers(d));
        out.emplace_back("LinearSlope", 5, d, linear_slope(d));
        out.emplace_back("SharpRidge", 13, d, sharp_ridge(d));
        out.emplace_back("StepEllipsoidal", 7, d, step_ellipsoid(d));
        out.emplace_back("RosenbrockRotated", 9, d, rosenbrock(d, 0.5));
        out.emplace_back("SchaffersIllConditioned", 18, d, schaffers(d, 1000.0));
        out.emplace_back("LunacekBiR", 24, d, lunacek_bi_rastrigin(d));
        out.emplace_back("GG101me", 21, d, gallagher(d, 101, 1000.0, 5.0, 21));
        out.emplace_back("GG21hi", 22, d, gallagher(d, 21, 1000.0 * 1000.0, 4.9, 22));
    }
    return out;
}

std::string lower_case(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

std::string FunctionId::label() const { return name + "_" + std::to_string(dimension); }

BenchmarkFunction::BenchmarkFunction(std::string name, int bbob_index, std::size_t dimension, Objective objective,
                                     double lower, double upper)
    : name_(std::move(name)), bbob_index_(bbob_index), dimension_(dimension), objective_(std::move(objective)),
      lower_(Vector::Constant(dimension, lower)), upper_(Vector::Constant(dimension, upper)) {
    if (dimension == 0)
        throw std::invalid_argument("benchmark function needs a positive dimension");
}

Vector BenchmarkFunction::clip(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

double BenchmarkFunction::operator()(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dimension_)
        throw std::invalid_argument(name_ + ": expected " + std::to_string(dimension_) + " variables, got " +
                                    std::to_string(x.size()));
    return objective_(x);
}

EvalBudget::EvalBudget(std::size_t max_evaluations) : max_(max_evaluations) {
    if (max_evaluations == 0)
        throw std::invalid_argument("evaluation budget must be positive");
}

void EvalBudget::charge() {
    if (used_ >= max_)
        throw BudgetExhausted();
    ++used_;
}

double Evaluator::operator()(const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != fn_->dimension())
        throw std::invalid_argument("evaluator: dimension mismatch");
    budget_.charge();
    return (*fn_)(x);
}

const std::vector<BenchmarkFunction>& registry() {
    static const std::vector<BenchmarkFunction> functions = build_registry();
    return functions;
}

std::vector<FunctionId> registry_list() {
    std::vector<FunctionId> ids;
    for (const auto& fn : registry())
        ids.push_back(fn.id());
    return ids;
}

const BenchmarkFunction& find_function(const std::string& name, std::size_t dimension) {
    const std::string key = lower_case(name);
    for (const auto& fn : registry())
        if (fn.dimension() == dimension && lower_case(fn.name()) == key)
            return fn;
    throw std::out_of_range("unknown benchmark function " + name + " in " + std::to_string(dimension) + "-D");
}

const BenchmarkFunction& find_function(const FunctionId& id) { return find_function(id.name, id.dimension); }

FunctionId parse_function_id(const std::string& text) {
    const auto pos = text.find_last_of("_:");
    if (pos == std::string::npos || pos + 1 >= text.size())
        throw std::invalid_argument("function id must look like Name_10, got '" + text + "'");
    std::size_t used = 0;
    const auto dim = std::stoul(text.substr(pos + 1), &used);
    if (used != text.size() - pos - 1)
        throw std::invalid_argument("bad dimension in function id '" + text + "'");
    return {text.substr(0, pos), dim};
}

} // namespace rlea
