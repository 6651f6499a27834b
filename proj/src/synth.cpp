#include "dimscope/synth.hpp"

#include <Eigen/QR>
#include <cmath>

namespace dimscope {

namespace {

constexpr std::uint64_t kBasisStreamTag = 0;

// Swiss roll parameter range: t in [1.5*pi, 4.5*pi], height in [0, 21]
// (the common benchmark convention), then every coordinate is divided by
// 4.5*pi so the spiral radius is at most 1 and the default noise schedule
// of the score model matches the data scale.
constexpr double kRollTMin = 1.5 * M_PI;
constexpr double kRollTMax = 4.5 * M_PI;
constexpr double kRollHeight = 21.0;
constexpr double kRollScale = 1.0 / kRollTMax;

}  // namespace

std::string to_string(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::subspace_gaussian: return "subspace_gaussian";
        case ManifoldKind::k_sphere: return "k_sphere";
        case ManifoldKind::k_cube: return "k_cube";
        case ManifoldKind::swiss_roll: return "swiss_roll";
    }
    throw ValidationError("unknown manifold kind");
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
    if (name == "subspace_gaussian") return ManifoldKind::subspace_gaussian;
    if (name == "k_sphere") return ManifoldKind::k_sphere;
    if (name == "k_cube") return ManifoldKind::k_cube;
    if (name == "swiss_roll") return ManifoldKind::swiss_roll;
    throw ValidationError("unknown manifold kind '" + name + "'");
}

void validate(const ManifoldSpec& spec) {
    if (spec.ambient_d < 1) throw ValidationError("ManifoldSpec: ambient_d must be >= 1");
    if (spec.n < 1) throw ValidationError("ManifoldSpec: n must be >= 1");
    if (spec.noise_sigma < 0.0)
        throw ValidationError("ManifoldSpec: noise_sigma must be >= 0");
    if (spec.kind == ManifoldKind::swiss_roll) {
        if (spec.ambient_d < 3)
            throw ValidationError("ManifoldSpec: swiss_roll needs ambient_d >= 3");
        if (spec.intrinsic_k != 2)
            throw ValidationError("ManifoldSpec: swiss_roll fixes intrinsic_k = 2");
    } else {
        if (spec.intrinsic_k < 1)
            throw ValidationError("ManifoldSpec: intrinsic_k must be >= 1");
        if (spec.intrinsic_k > spec.ambient_d)
            throw ValidationError("ManifoldSpec: intrinsic_k exceeds ambient_d");
        if (spec.kind == ManifoldKind::k_sphere && spec.intrinsic_k + 1 > spec.ambient_d)
            throw ValidationError("ManifoldSpec: k_sphere needs ambient_d >= k + 1");
    }
    if (!spec.lambdas.empty()) {
        if (spec.kind != ManifoldKind::subspace_gaussian)
            throw ValidationError("ManifoldSpec: lambdas apply to subspace_gaussian only");
        if (static_cast<Index>(spec.lambdas.size()) != spec.intrinsic_k)
            throw ValidationError("ManifoldSpec: lambdas length must equal intrinsic_k");
        for (double l : spec.lambdas)
            if (!(l > 0.0)) throw ValidationError("ManifoldSpec: lambdas must be positive");
    }
}

std::vector<double> resolve_lambdas(const ManifoldSpec& spec) {
    if (!spec.lambdas.empty()) return spec.lambdas;
    std::vector<double> lambdas(static_cast<std::size_t>(spec.intrinsic_k));
    double value = 1.0;
    for (auto& l : lambdas) {
        l = value;
        value *= 0.8;
    }
    return lambdas;
}

Matrix subspace_basis(const ManifoldSpec& spec, Index cols) {
    SeedPolicy policy{spec.seed};
    Rng rng(policy.auxiliary_stream(kBasisStreamTag));
    const Index d = spec.ambient_d;
    Matrix g = rng.gaussian_matrix(d, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, cols);
    const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    // Fix the sign gauge so the basis is reproducible.
    for (Index j = 0; j < cols; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

ManifoldSample sample_manifold(const ManifoldSpec& spec) {
    validate(spec);
    const SeedPolicy policy{spec.seed};
    const Index n = spec.n, d = spec.ambient_d, k = spec.intrinsic_k;

    ManifoldSample out;
    out.spec = spec;
    out.true_k = static_cast<int>(k);
    out.points.data.resize(n, d);
    out.points.ids = default_ids(n);

    const auto lambdas = resolve_lambdas(spec);

    switch (spec.kind) {
        case ManifoldKind::subspace_gaussian: {
            out.basis = subspace_basis(spec, k);
            for (Index i = 0; i < n; ++i) {
                Rng rng(policy.sample_stream(static_cast<std::uint64_t>(i)));
                Vector z(k);
                for (Index j = 0; j < k; ++j)
                    z(j) = std::sqrt(lambdas[static_cast<std::size_t>(j)]) * rng.gaussian();
                Vector x = out.basis * z;
                if (spec.noise_sigma > 0.0)
                    x += spec.noise_sigma * rng.gaussian_vector(d);
                out.points.data.row(i) = x.transpose();
            }
            break;
        }
        case ManifoldKind::k_sphere: {
            out.basis = subspace_basis(spec, d);  // full rotation
            for (Index i = 0; i < n; ++i) {
                Rng rng(policy.sample_stream(static_cast<std::uint64_t>(i)));
                Vector g = rng.gaussian_vector(k + 1);
                const double norm = g.norm();
                Vector x = Vector::Zero(d);
                x.head(k + 1) = g / norm;
                x = out.basis * x;
                if (spec.noise_sigma > 0.0)
                    x += spec.noise_sigma * rng.gaussian_vector(d);
                out.points.data.row(i) = x.transpose();
            }
            break;
        }
        case ManifoldKind::k_cube: {
            for (Index i = 0; i < n; ++i) {
                Rng rng(policy.sample_stream(static_cast<std::uint64_t>(i)));
                Vector x = Vector::Zero(d);
                for (Index j = 0; j < k; ++j) x(j) = rng.uniform();
                if (spec.noise_sigma > 0.0)
                    x += spec.noise_sigma * rng.gaussian_vector(d);
                out.points.data.row(i) = x.transpose();
            }
            break;
        }
        case ManifoldKind::swiss_roll: {
            for (Index i = 0; i < n; ++i) {
                Rng rng(policy.sample_stream(static_cast<std::uint64_t>(i)));
                const double t = kRollTMin + (kRollTMax - kRollTMin) * rng.uniform();
                const double h = kRollHeight * rng.uniform();
                Vector x = Vector::Zero(d);
                x(0) = t * std::cos(t) * kRollScale;
                x(1) = h * kRollScale;
                x(2) = t * std::sin(t) * kRollScale;
                if (spec.noise_sigma > 0.0)
                    x += spec.noise_sigma * rng.gaussian_vector(d);
                out.points.data.row(i) = x.transpose();
            }
            break;
        }
    }
    return out;
}

std::pair<Vector, Matrix> analytic_covariance(const ManifoldSpec& spec) {
    validate(spec);
    if (spec.kind != ManifoldKind::subspace_gaussian)
        throw ValidationError("analytic_covariance: only subspace_gaussian has a closed form");
    const Index d = spec.ambient_d, k = spec.intrinsic_k;
    const Matrix u = subspace_basis(spec, k);
    const auto lambdas = resolve_lambdas(spec);
    Vector lambda_vec(k);
    for (Index j = 0; j < k; ++j) lambda_vec(j) = lambdas[static_cast<std::size_t>(j)];
    Matrix cov = u * lambda_vec.asDiagonal() * u.transpose();
    if (spec.noise_sigma > 0.0)
        cov += (spec.noise_sigma * spec.noise_sigma) * Matrix::Identity(d, d);
    return {Vector::Zero(d), cov};
}

}  // namespace dimscope
