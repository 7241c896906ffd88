#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vrigid/errors.hpp"
#include "vrigid/expression.hpp"
#include "vrigid/vec.hpp"

namespace vrigid {

/// One-variable continuous curve s(y): either a parsed expression in y or a
/// sampled table with linear interpolation.
class CurveSpec {
public:
    static CurveSpec fromExpression(const std::string& text) {
        CurveSpec s;
        s.expr_ = Expression::parse(text);
        return s;
    }

    static CurveSpec fromTable(std::vector<double> ys, std::vector<double> vs) {
        if (ys.size() != vs.size() || ys.size() < 2)
            throw ParseError("curve table needs at least two (y, value) rows");
        for (std::size_t i = 1; i < ys.size(); ++i)
            if (!(ys[i] > ys[i - 1]))
                throw ParseError("curve table abscissae must be strictly increasing");
        CurveSpec s;
        s.ys_ = std::move(ys);
        s.vs_ = std::move(vs);
        return s;
    }

    double eval(double y) const {
        if (!expr_.empty()) return expr_.eval(0.0, y);
        if (y < ys_.front() || y > ys_.back())
            throw OutOfDomain("curve table query outside abscissa range");
        auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
        std::size_t hi = std::min<std::size_t>(ys_.size() - 1, it - ys_.begin());
        if (hi == 0) hi = 1;
        std::size_t lo = hi - 1;
        double w = (y - ys_[lo]) / (ys_[hi] - ys_[lo]);
        return vs_[lo] + w * (vs_[hi] - vs_[lo]);
    }

    bool isTable() const { return expr_.empty(); }
    const std::vector<double>& tableYs() const { return ys_; }
    const std::vector<double>& tableValues() const { return vs_; }
    const std::string& expressionText() const { return expr_.source(); }

private:
    Expression expr_;
    std::vector<double> ys_, vs_;
};

struct Affine {
    double a = 0, b = 0, d = 0;
    double eval(double x, double y) const { return a + b * x + d * y; }
};

struct ExpStrip {
    double a = 0, k = 1;
    CurveSpec s;
    double eval(double x, double y) const { return a + s.eval(y) * std::exp(k * x); }
};

struct ExpAffine {
    double a = 0, b = 1, d = 1, k = 1;
    double eval(double x, double y) const { return a + b * std::exp(k * x) + d * y; }
};

/// Sampled surface on a rectangular lattice; bilinear strictly inside the
/// hull, hard error outside.
class GridBody {
public:
    GridBody(Vec2 origin, Vec2 spacing, std::vector<std::vector<double>> values)
        : origin_(origin), spacing_(spacing), values_(std::move(values)) {
        if (!(spacing_.x > 0.0) || !(spacing_.y > 0.0))
            throw ParseError("grid spacing must be strictly positive");
        if (values_.empty() || values_.front().empty())
            throw ParseError("grid values must be nonempty");
        for (const auto& row : values_)
            if (row.size() != values_.front().size())
                throw ParseError("grid values must be rectangular");
    }

    double eval(double x, double y) const {
        double fx = (x - origin_.x) / spacing_.x;
        double fy = (y - origin_.y) / spacing_.y;
        std::size_t nx = values_.front().size(), ny = values_.size();
        if (fx < 0.0 || fy < 0.0 || fx > double(nx - 1) || fy > double(ny - 1))
            throw OutOfDomain("grid query outside hull");
        std::size_t i = std::min<std::size_t>(nx - 2, std::size_t(fx));
        std::size_t j = std::min<std::size_t>(ny - 2, std::size_t(fy));
        double u = fx - double(i), v = fy - double(j);
        const double z00 = values_[j][i], z10 = values_[j][i + 1];
        const double z01 = values_[j + 1][i], z11 = values_[j + 1][i + 1];
        return (1 - u) * (1 - v) * z00 + u * (1 - v) * z10 + (1 - u) * v * z01 + u * v * z11;
    }

    const Vec2& origin() const { return origin_; }
    const Vec2& spacing() const { return spacing_; }
    const std::vector<std::vector<double>>& values() const { return values_; }

private:
    Vec2 origin_, spacing_;
    std::vector<std::vector<double>> values_;
};

/// Candidate surface f: R^2 -> R with an optional rotation about the z-axis.
/// With zRotation theta, evaluation is body(R_{-theta}(x, y)), i.e. the graph
/// is the body's graph rotated by theta.
class FunctionSpec {
public:
    using Body = std::variant<Affine, ExpStrip, ExpAffine, Expression, GridBody>;

    FunctionSpec(Body body, double zRotation = 0.0)
        : body_(std::make_shared<Body>(std::move(body))), zRotation_(zRotation) {
        if (const auto* e = std::get_if<ExpStrip>(body_.get())) {
            if (e->k == 0.0) throw DegenerateFamily("expstrip requires k != 0");
        } else if (const auto* e2 = std::get_if<ExpAffine>(body_.get())) {
            if (e2->k == 0.0) throw DegenerateFamily("expaffine requires k != 0");
        }
    }

    double operator()(double x, double y) const { return eval(x, y); }

    double eval(double x, double y) const {
        Vec2 p{x, y};
        if (zRotation_ != 0.0) p = rotate2(p, -zRotation_);
        return std::visit([&](const auto& b) { return b.eval(p.x, p.y); }, *body_);
    }

    double eval(const Vec2& p) const { return eval(p.x, p.y); }

    double zRotation() const { return zRotation_; }
    const Body& body() const { return *body_; }

    template <class T>
    const T* bodyAs() const {
        return std::get_if<T>(body_.get());
    }

private:
    friend FunctionSpec rotate_about_z(const FunctionSpec&, double);

    std::shared_ptr<const Body> body_;
    double zRotation_ = 0.0;
};

inline double eval_expression_body(const Expression& e, double x, double y) { return e.eval(x, y); }

/// Returned spec's graph is the input graph rotated about the z-axis by theta.
inline FunctionSpec rotate_about_z(const FunctionSpec& spec, double theta) {
    FunctionSpec out = spec;
    out.zRotation_ = spec.zRotation_ + theta;
    return out;
}

struct Window {
    double xmin, xmax, ymin, ymax;
    int nx = 41, ny = 41;

    Window(double xmin, double xmax, double ymin, double ymax, int nx = 41, int ny = 41)
        : xmin(xmin), xmax(xmax), ymin(ymin), ymax(ymax), nx(nx), ny(ny) {
        if (!(xmin < xmax) || !(ymin < ymax))
            throw UsageError("window bounds must satisfy xmin < xmax and ymin < ymax");
        if (nx < 2 || ny < 2) throw UsageError("window grid counts must be >= 2");
    }

    static Window square(double half, int n = 41) { return Window(-half, half, -half, half, n, n); }

    double xAt(int i) const { return xmin + (xmax - xmin) * double(i) / double(nx - 1); }
    double yAt(int j) const { return ymin + (ymax - ymin) * double(j) / double(ny - 1); }
    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
};

inline double directional_slope(const FunctionSpec& spec, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len = d.norm();
    if (len == 0.0) throw DegenerateSegment("directional_slope endpoints coincide");
    return (spec.eval(b) - spec.eval(a)) / len;
}

// --- Normalization of the a + b e^{kx} + dy family to e^x + y ---------------

/// One step of the graph transform chain; each preserves vertical rigidity.
struct GraphMapStep {
    enum class Kind { Homothety, Translate, ReflectXZ, VerticalScale };
    Kind kind;
    double scale = 1.0;  // Homothety / VerticalScale factor
    Vec3 shift{};        // Translate offset

    Vec3 apply(const Vec3& p) const {
        switch (kind) {
            case Kind::Homothety: return p * scale;
            case Kind::Translate: return p + shift;
            case Kind::ReflectXZ: return {p.x, -p.y, p.z};
            default: return {p.x, p.y, p.z * scale};
        }
    }
};

/// Applied left-to-right to graph(e^x + y), reproduces graph(f).
struct TransformChain {
    std::vector<GraphMapStep> steps;

    Vec3 apply(Vec3 p) const {
        for (const auto& s : steps) p = s.apply(p);
        return p;
    }
    bool isIdentity() const { return steps.empty(); }
};

/// Reduces ExpAffine{a,b,d,k} (b,d != 0) to the normal form e^x + y and
/// records the chain mapping graph(e^x+y) back onto graph(f).
inline std::pair<FunctionSpec, TransformChain> normalize_exp_affine(const FunctionSpec& spec) {
    const auto* fam = spec.bodyAs<ExpAffine>();
    if (!fam) throw DegenerateFamily("normalize_exp_affine requires an ExpAffine body");
    if (fam->b == 0.0 || fam->d == 0.0)
        throw DegenerateFamily("degenerate family: b = 0 or d = 0");

    const double k = fam->k;
    const double A = k * fam->a;  // after homothety by k
    const double B = k * fam->b;
    const double D = fam->d;
    const bool reflect = (B > 0) != (D > 0);
    const double D3 = reflect ? -D : D;
    const double beta = B / D3;  // > 0
    const double t = std::log(beta);

    TransformChain chain;
    auto push = [&](GraphMapStep s) { chain.steps.push_back(s); };
    if (t != 0.0)
        push({GraphMapStep::Kind::Translate, 1.0, {-t, 0.0, 0.0}});
    if (D3 != 1.0) push({GraphMapStep::Kind::VerticalScale, D3, {}});
    if (reflect) push({GraphMapStep::Kind::ReflectXZ, 1.0, {}});
    if (A != 0.0) push({GraphMapStep::Kind::Translate, 1.0, {0.0, 0.0, A}});
    if (k != 1.0) push({GraphMapStep::Kind::Homothety, 1.0 / k, {}});

    FunctionSpec normal(ExpAffine{0.0, 1.0, 1.0, 1.0});
    // Chain steps must respect the zRotation of the input as well.
    if (spec.zRotation() != 0.0)
        throw DegenerateFamily("normalize_exp_affine expects an unrotated spec");
    return {normal, chain};
}

}  // namespace vrigid
