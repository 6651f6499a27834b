#include "dimscope/core.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace dimscope {

std::uint64_t stream_seed(std::uint64_t global_seed, std::uint64_t stream_index) {
    // splitmix64 finalizer over a golden-ratio-stepped input
    std::uint64_t z = global_seed + 0x9E3779B97F4A7C15ull * (stream_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ValidationError("Rng::below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open_closed();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Matrix Rng::gaussian_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) m(r, c) = gaussian();
    return m;
}

Vector Rng::gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
}

void validate(const PointSet& pts) {
    if (pts.data.rows() < 1) throw ValidationError("PointSet: need at least one sample");
    if (pts.data.cols() < 1) throw ValidationError("PointSet: ambient dimension must be >= 1");
    if (static_cast<Index>(pts.ids.size()) != pts.data.rows())
        throw ValidationError("PointSet: id count does not match sample count");
    for (Index i = 0; i < pts.data.rows(); ++i) {
        if (!pts.data.row(i).allFinite())
            throw ValidationError("PointSet: non-finite value in sample '" + pts.ids[i] + "'");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : pts.ids) {
        if (!seen.insert(id).second)
            throw ValidationError("PointSet: duplicate sample id '" + id + "'");
    }
}

std::vector<std::string> default_ids(Index n) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    return ids;
}

void validate(const ImageGrid& img) {
    if (img.height() < 3 || img.width() < 3)
        throw ValidationError("ImageGrid '" + img.id + "': need at least 3x3 pixels");
    if (!img.pixels.allFinite())
        throw ValidationError("ImageGrid '" + img.id + "': non-finite pixel");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::diffusion: return "diffusion";
        case Method::mle: return "mle";
        case Method::lpca: return "lpca";
        case Method::ppca: return "ppca";
    }
    throw ValidationError("unknown method");
}

Method method_from_string(const std::string& name) {
    if (name == "diffusion") return Method::diffusion;
    if (name == "mle") return Method::mle;
    if (name == "lpca") return Method::lpca;
    if (name == "ppca") return Method::ppca;
    throw ValidationError("unknown method '" + name + "'");
}

std::string to_string(NormalizeMode m) {
    return m == NormalizeMode::per_sample_minmax ? "per_sample_minmax" : "none";
}

NormalizeMode normalize_mode_from_string(const std::string& name) {
    if (name == "per_sample_minmax") return NormalizeMode::per_sample_minmax;
    if (name == "none") return NormalizeMode::none;
    throw ValidationError("unknown normalization mode '" + name + "'");
}

RowVector flatten_image(const ImageGrid& img) {
    validate(img);
    const Index h = img.height(), w = img.width();
    RowVector point(h * w);
    for (Index r = 0; r < h; ++r)
        for (Index c = 0; c < w; ++c) point(r * w + c) = img.pixels(r, c);
    return point;
}

ImageGrid unflatten_image(const RowVector& point, Index height, Index width,
                          const std::string& id) {
    if (point.size() != height * width)
        throw ValidationError("unflatten_image: length " + std::to_string(point.size()) +
                              " does not match " + std::to_string(height) + "x" +
                              std::to_string(width));
    ImageGrid img;
    img.id = id;
    img.pixels.resize(height, width);
    for (Index r = 0; r < height; ++r)
        for (Index c = 0; c < width; ++c) img.pixels(r, c) = point(r * width + c);
    return img;
}

PointSet normalize_pixels(const PointSet& pts, NormalizeMode mode) {
    validate(pts);
    if (mode == NormalizeMode::none) return pts;
    PointSet out = pts;
    for (Index i = 0; i < out.data.rows(); ++i) {
        const double lo = out.data.row(i).minCoeff();
        const double hi = out.data.row(i).maxCoeff();
        if (hi == lo) {
            out.data.row(i).setZero();  // blank cutout
        } else {
            out.data.row(i) = (out.data.row(i).array() - lo) / (hi - lo);
        }
    }
    return out;
}

void parallel_for(Index count, int workers, const std::function<void(Index)>& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (Index i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const Index i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<Index>(workers, count));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dimscope
