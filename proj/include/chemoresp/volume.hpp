#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chemoresp/errors.hpp"

namespace chemoresp {

// NIfTI datatype codes used for serialization round-trips.
enum NiftiDatatype : int {
    kDtUint8 = 2,
    kDtInt16 = 4,
    kDtInt32 = 8,
    kDtFloat32 = 16,
    kDtFloat64 = 64,
};

constexpr double kGridTolerance = 1e-5;

// Scalar 3D grid. Voxel (i,j,k) lives at data[i + nx*(j + ny*k)] (x fastest,
// NIfTI order). Immutable by convention once built.
struct Volume3D {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<double, 9> direction{1, 0, 0, 0, 1, 0, 0, 0, 1}; // row-major 3x3
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::vector<double> data;
    int nifti_datatype = kDtFloat32; // preserved across read/write

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
    }
    double at(int i, int j, int k) const { return data[index(i, j, k)]; }
    double& at(int i, int j, int k) { return data[index(i, j, k)]; }

    void validate() const {
        if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
            throw ShapeError("volume dims must be positive");
        if (data.size() != voxel_count())
            throw ShapeError("volume data length " + std::to_string(data.size()) +
                             " does not match dims product " + std::to_string(voxel_count()));
        for (double s : spacing)
            if (!(s > 0.0)) throw ShapeError("volume spacing must be strictly positive");
        for (double v : data)
            if (!std::isfinite(v)) throw ShapeError("volume contains non-finite values");
    }
};

// Integer label grid on the same lattice conventions as Volume3D.
struct LabelMask {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<double, 9> direction{1, 0, 0, 0, 1, 0, 0, 0, 1};
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::vector<std::uint8_t> labels;
    int nifti_datatype = kDtUint8;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
    }
    std::uint8_t at(int i, int j, int k) const { return labels[index(i, j, k)]; }
    std::uint8_t& at(int i, int j, int k) { return labels[index(i, j, k)]; }

    void validate() const {
        if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
            throw ShapeError("mask dims must be positive");
        if (labels.size() != voxel_count())
            throw ShapeError("mask label length does not match dims product");
        for (double s : spacing)
            if (!(s > 0.0)) throw ShapeError("mask spacing must be strictly positive");
    }

    // Vocabulary check, e.g. {0,1} or {0..4}.
    void validate_labels(std::uint8_t max_label) const {
        for (auto v : labels)
            if (v > max_label)
                throw FormatError("mask label " + std::to_string(int(v)) + " exceeds vocabulary max " +
                                  std::to_string(int(max_label)));
    }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (auto v : labels) n += (v != 0);
        return n;
    }
};

template <class GridA, class GridB>
inline bool grids_congruent(const GridA& a, const GridB& b, double tol = kGridTolerance) {
    if (a.dims != b.dims) return false;
    for (int i = 0; i < 3; ++i)
        if (std::abs(a.spacing[i] - b.spacing[i]) > tol) return false;
    for (int i = 0; i < 9; ++i)
        if (std::abs(a.direction[i] - b.direction[i]) > tol) return false;
    for (int i = 0; i < 3; ++i)
        if (std::abs(a.origin[i] - b.origin[i]) > tol) return false;
    return true;
}

template <class GridA, class GridB>
inline void require_congruent(const GridA& a, const GridB& b, const std::string& what) {
    if (!grids_congruent(a, b)) throw GridError("grid mismatch: " + what);
}

enum class Interp { trilinear, nearest };

namespace detail {

// Corner-aligned source coordinate for output index i: i*(n_in-1)/(n_out-1);
// a single output sample takes the input center.
inline double src_coord(int i, int n_in, int n_out) {
    if (n_out <= 1) return 0.5 * (n_in - 1);
    return static_cast<double>(i) * static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1);
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

template <class Grid>
inline void fill_resampled_geometry(const Grid& src, Grid& dst, const std::array<int, 3>& target) {
    dst.dims = target;
    dst.direction = src.direction;
    dst.origin = src.origin;
    for (int a = 0; a < 3; ++a) {
        dst.spacing[a] = (target[a] > 1 && src.dims[a] > 1)
                             ? src.spacing[a] * static_cast<double>(src.dims[a] - 1) /
                                   static_cast<double>(target[a] - 1)
                             : src.spacing[a];
    }
}

} // namespace detail

inline Volume3D resample(const Volume3D& vol, const std::array<int, 3>& target, Interp mode) {
    vol.validate();
    if (target[0] < 1 || target[1] < 1 || target[2] < 1)
        throw ShapeError("resample target dims must be positive");
    if (target == vol.dims) return vol; // dims unchanged => identity

    Volume3D out;
    detail::fill_resampled_geometry(vol, out, target);
    out.nifti_datatype = vol.nifti_datatype;
    out.data.resize(out.voxel_count());

    const int nx = vol.dims[0], ny = vol.dims[1], nz = vol.dims[2];
    std::size_t o = 0;
    for (int k = 0; k < target[2]; ++k) {
        const double zf = detail::src_coord(k, nz, target[2]);
        for (int j = 0; j < target[1]; ++j) {
            const double yf = detail::src_coord(j, ny, target[1]);
            for (int i = 0; i < target[0]; ++i, ++o) {
                const double xf = detail::src_coord(i, nx, target[0]);
                if (mode == Interp::nearest) {
                    const int xi = detail::clamp_index(static_cast<int>(std::floor(xf + 0.5)), nx);
                    const int yi = detail::clamp_index(static_cast<int>(std::floor(yf + 0.5)), ny);
                    const int zi = detail::clamp_index(static_cast<int>(std::floor(zf + 0.5)), nz);
                    out.data[o] = vol.at(xi, yi, zi);
                } else {
                    const int x0 = detail::clamp_index(static_cast<int>(std::floor(xf)), nx);
                    const int y0 = detail::clamp_index(static_cast<int>(std::floor(yf)), ny);
                    const int z0 = detail::clamp_index(static_cast<int>(std::floor(zf)), nz);
                    const int x1 = detail::clamp_index(x0 + 1, nx);
                    const int y1 = detail::clamp_index(y0 + 1, ny);
                    const int z1 = detail::clamp_index(z0 + 1, nz);
                    const double fx = xf - x0, fy = yf - y0, fz = zf - z0;
                    const double c000 = vol.at(x0, y0, z0), c100 = vol.at(x1, y0, z0);
                    const double c010 = vol.at(x0, y1, z0), c110 = vol.at(x1, y1, z0);
                    const double c001 = vol.at(x0, y0, z1), c101 = vol.at(x1, y0, z1);
                    const double c011 = vol.at(x0, y1, z1), c111 = vol.at(x1, y1, z1);
                    const double c00 = c000 + (c100 - c000) * fx;
                    const double c10 = c010 + (c110 - c010) * fx;
                    const double c01 = c001 + (c101 - c001) * fx;
                    const double c11 = c011 + (c111 - c011) * fx;
                    const double c0 = c00 + (c10 - c00) * fy;
                    const double c1 = c01 + (c11 - c01) * fy;
                    out.data[o] = c0 + (c1 - c0) * fz;
                }
            }
        }
    }
    return out;
}

inline LabelMask resample(const LabelMask& mask, const std::array<int, 3>& target,
                          Interp mode = Interp::nearest) {
    if (mode == Interp::trilinear)
        throw ModeError("trilinear interpolation is not defined for label masks");
    mask.validate();
    if (target[0] < 1 || target[1] < 1 || target[2] < 1)
        throw ShapeError("resample target dims must be positive");
    if (target == mask.dims) return mask;

    LabelMask out;
    detail::fill_resampled_geometry(mask, out, target);
    out.nifti_datatype = mask.nifti_datatype;
    out.labels.resize(out.voxel_count());

    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    std::size_t o = 0;
    for (int k = 0; k < target[2]; ++k) {
        const int zi = detail::clamp_index(
            static_cast<int>(std::floor(detail::src_coord(k, nz, target[2]) + 0.5)), nz);
        for (int j = 0; j < target[1]; ++j) {
            const int yi = detail::clamp_index(
                static_cast<int>(std::floor(detail::src_coord(j, ny, target[1]) + 0.5)), ny);
            for (int i = 0; i < target[0]; ++i, ++o) {
                const int xi = detail::clamp_index(
                    static_cast<int>(std::floor(detail::src_coord(i, nx, target[0]) + 0.5)), nx);
                out.labels[o] = mask.at(xi, yi, zi);
            }
        }
    }
    return out;
}

} // namespace chemoresp
