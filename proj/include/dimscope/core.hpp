// Domain types shared by every estimator, plus image flattening and
// normalization utilities.

#ifndef DIMSCOPE_CORE_HPP
#define DIMSCOPE_CORE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dimscope/common.hpp"
#include "dimscope/rng.hpp"

namespace dimscope {

/// n samples by d ambient dimensions, one row per sample.
struct PointSet {
    Matrix data;                    // n x d
    std::vector<std::string> ids;   // size n, unique

    Index size() const { return data.rows(); }
    Index dimension() const { return data.cols(); }
};

/// Validates n >= 1, d >= 1, finite rows, unique ids matching n.
void validate(const PointSet& pts);

/// Assigns decimal-index ids "0".."n-1".
std::vector<std::string> default_ids(Index n);

/// A single cutout; h, w >= 3 so a border ring exists for noise estimation.
struct ImageGrid {
    Matrix pixels;   // h x w
    std::string id;

    Index height() const { return pixels.rows(); }
    Index width() const { return pixels.cols(); }
};

void validate(const ImageGrid& img);

enum class Method { diffusion, mle, lpca, ppca };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// Per-sample intrinsic-dimension record.
///
/// k_hat is the integer estimate; `value` carries the real-valued estimate
/// for methods that produce one (MLE) and equals k_hat otherwise. The
/// spectrum, when present, is sorted non-increasing; truncated marks
/// spectra with fewer than d values (the K < d regime).
struct IdEstimate {
    std::string sample_id;
    Method method = Method::diffusion;
    int k_hat = 0;
    double value = 0.0;
    std::vector<double> spectrum;
    std::optional<int> gap_index;
    bool truncated = false;
    bool low_confidence = false;
    std::string params;
};

/// A per-sample failure that did not abort the batch.
struct Exclusion {
    std::string sample_id;
    std::string reason;
};

enum class NormalizeMode { per_sample_minmax, none };

std::string to_string(NormalizeMode m);
NormalizeMode normalize_mode_from_string(const std::string& name);

/// Row vector of length h*w with point[r*w + c] = pixels(r, c).
RowVector flatten_image(const ImageGrid& img);

/// Inverse of flatten_image for a known shape.
ImageGrid unflatten_image(const RowVector& point, Index height, Index width,
                          const std::string& id = {});

/// per_sample_minmax maps each row affinely onto [0,1]; constant rows map
/// to all zeros so blank cutouts survive batch jobs. none is the identity.
PointSet normalize_pixels(const PointSet& pts, NormalizeMode mode);

/// Runs fn(0..count-1) across `workers` threads. Each index is processed
/// exactly once; callers own output slots, so results are independent of
/// scheduling. The first exception, if any, is rethrown after join.
void parallel_for(Index count, int workers, const std::function<void(Index)>& fn);

}  // namespace dimscope

#endif  // DIMSCOPE_CORE_HPP
