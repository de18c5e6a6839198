#pragma once
#include <vector>

#include "image.hpp"

namespace ffv {

struct PrealignParams {
    int threshold = 128; // pixels below this count as foreground
    int downscale = 4;
    int cap_deg = 45; // max 1-degree steps
};

struct AlignReport {
    int total_rotation_deg = 0; // rotation applied to straighten, our convention
    int iterations = 0;
    int shift_dx = 0, shift_dy = 0; // centering shift, original-resolution px
};

/// Coarse upright alignment: downscale, binarize, center the foreground
/// centroid, then walk in 1-degree steps chosen by quadrant balance
/// (upper-left + lower-right heavier means rotate -1, else +1) until the
/// chosen direction flips or cap_deg steps were taken. Assumes the
/// foreground is taller than wide, as fingerprints are.
/// Throws errc::empty_foreground when nothing is below the threshold.
AlignReport prealign(const GrayImage& img, const PrealignParams& pp = {});

/// Rotation (degrees) that straightens a point cloud, estimated by running
/// prealign on the filled convex hull rendered into the frame. Landscape
/// regions are handled by running on the transposed hull.
double estimate_point_rotation(const std::vector<Minutia>& pts, const Ellipse& region,
                               int frame_w, int frame_h, const PrealignParams& pp = {});

} // namespace ffv
