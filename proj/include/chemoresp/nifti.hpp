#pragma once

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "chemoresp/errors.hpp"
#include "chemoresp/volume.hpp"

namespace chemoresp {
namespace nifti {

// NIfTI-1 header, little-endian on disk. Field layout matches the standard
// 348-byte struct; natural alignment produces the canonical offsets.
struct Header {
    std::int32_t sizeof_hdr;
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max, cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax, glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code;
    std::int16_t sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4];
    float srow_y[4];
    float srow_z[4];
    char intent_name[16];
    char magic[4];
};
static_assert(sizeof(Header) == 348, "NIfTI-1 header must be 348 bytes");
static_assert(offsetof(Header, dim) == 40 && offsetof(Header, pixdim) == 76 &&
                  offsetof(Header, srow_x) == 280 && offsetof(Header, magic) == 344,
              "unexpected NIfTI-1 header layout");

inline int datatype_size(int dt) {
    switch (dt) {
        case kDtUint8: return 1;
        case kDtInt16: return 2;
        case kDtInt32: return 4;
        case kDtFloat32: return 4;
        case kDtFloat64: return 8;
        default:
            throw UnsupportedDatatype("unsupported NIfTI datatype code " + std::to_string(dt));
    }
}

namespace detail {

struct GzReader {
    gzFile f = nullptr;
    explicit GzReader(const std::string& path) {
        f = gzopen(path.c_str(), "rb");
        if (!f) throw IoError("cannot open '" + path + "'");
    }
    ~GzReader() {
        if (f) gzclose(f);
    }
    GzReader(const GzReader&) = delete;
    GzReader& operator=(const GzReader&) = delete;

    void read_exact(void* dst, std::size_t n, const std::string& path) {
        std::size_t done = 0;
        auto* p = static_cast<char*>(dst);
        while (done < n) {
            const unsigned chunk =
                static_cast<unsigned>(std::min<std::size_t>(n - done, 1u << 28));
            const int got = gzread(f, p + done, chunk);
            if (got <= 0) throw FormatError("'" + path + "': truncated NIfTI payload");
            done += static_cast<std::size_t>(got);
        }
    }
    void skip(std::size_t n, const std::string& path) {
        char buf[4096];
        while (n > 0) {
            const std::size_t chunk = std::min(n, sizeof buf);
            read_exact(buf, chunk, path);
            n -= chunk;
        }
    }
};

struct ParsedGrid {
    std::array<int, 3> dims;
    std::array<double, 3> spacing;
    std::array<double, 9> direction;
    std::array<double, 3> origin;
    int datatype;
    float scl_slope, scl_inter;
};

inline ParsedGrid parse_header(const Header& h, const std::string& path) {
    if (h.sizeof_hdr != 348) {
        std::int32_t sw = h.sizeof_hdr;
        sw = std::int32_t(((std::uint32_t(sw) & 0xff) << 24) | ((std::uint32_t(sw) & 0xff00) << 8) |
                          ((std::uint32_t(sw) >> 8) & 0xff00) | ((std::uint32_t(sw) >> 24) & 0xff));
        if (sw == 348)
            throw FormatError("'" + path + "': big-endian NIfTI-1 is not supported");
        throw FormatError("'" + path + "': not a NIfTI-1 file (sizeof_hdr != 348)");
    }
    const bool n_plus_1 = std::memcmp(h.magic, "n+1", 4) == 0;
    const bool ni1 = std::memcmp(h.magic, "ni1", 4) == 0;
    if (!n_plus_1 && !ni1) throw FormatError("'" + path + "': bad NIfTI-1 magic");
    datatype_size(h.datatype); // validates the code
    if (h.dim[0] != 3 && h.dim[0] != 4)
        throw ShapeError("'" + path + "': dim[0] must be 3 or 4, got " + std::to_string(h.dim[0]));
    if (h.dim[0] == 4 && h.dim[4] > 1)
        throw ShapeError("'" + path + "': multi-frame files (dim[4] > 1) are not supported");

    ParsedGrid g;
    for (int a = 0; a < 3; ++a) {
        g.dims[a] = h.dim[a + 1];
        if (g.dims[a] < 1) throw ShapeError("'" + path + "': non-positive dim");
        g.spacing[a] = h.pixdim[a + 1] > 0.0f ? static_cast<double>(h.pixdim[a + 1]) : 1.0;
    }
    g.datatype = h.datatype;
    g.scl_slope = h.scl_slope;
    g.scl_inter = h.scl_inter;

    g.direction = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    g.origin = {0, 0, 0};
    if (h.sform_code > 0) {
        const float* rows[3] = {h.srow_x, h.srow_y, h.srow_z};
        std::array<double, 9> dir{};
        bool ok = true;
        for (int c = 0; c < 3 && ok; ++c) {
            const double norm = std::sqrt(double(rows[0][c]) * rows[0][c] +
                                          double(rows[1][c]) * rows[1][c] +
                                          double(rows[2][c]) * rows[2][c]);
            if (norm <= 0.0) {
                ok = false;
                break;
            }
            for (int r = 0; r < 3; ++r) dir[std::size_t(r * 3 + c)] = rows[r][c] / norm;
        }
        if (ok) {
            g.direction = dir;
            g.origin = {h.srow_x[3], h.srow_y[3], h.srow_z[3]};
        }
    } else if (h.qform_code > 0) {
        const double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
        const double a = std::sqrt(std::max(0.0, 1.0 - b * b - c * c - d * d));
        const double qfac = h.pixdim[0] < 0.0f ? -1.0 : 1.0;
        g.direction = {a * a + b * b - c * c - d * d, 2 * (b * c - a * d), qfac * 2 * (b * d + a * c),
                       2 * (b * c + a * d), a * a + c * c - b * b - d * d, qfac * 2 * (c * d - a * b),
                       2 * (b * d - a * c), 2 * (c * d + a * b), qfac * (a * a + d * d - b * b - c * c)};
        g.origin = {h.qoffset_x, h.qoffset_y, h.qoffset_z};
    }
    return g;
}

inline std::vector<char> read_payload(const std::string& path) {
    GzReader rd(path);
    Header h{};
    rd.read_exact(&h, sizeof h, path);
    const ParsedGrid g = parse_header(h, path);
    const std::size_t nvox = std::size_t(g.dims[0]) * std::size_t(g.dims[1]) * std::size_t(g.dims[2]);
    const std::size_t nbytes = nvox * std::size_t(datatype_size(g.datatype));

    const bool single_file = std::memcmp(h.magic, "n+1", 4) == 0;
    std::vector<char> raw(nbytes);
    if (single_file) {
        if (h.vox_offset < 348.0f)
            throw FormatError("'" + path + "': vox_offset below header size");
        rd.skip(static_cast<std::size_t>(h.vox_offset) - sizeof h, path);
        rd.read_exact(raw.data(), nbytes, path);
    } else {
        // header/data pair: payload lives in the matching .img file
        std::string img = path;
        const auto pos = img.rfind(".hdr");
        if (pos != std::string::npos && pos == img.size() - 4) img.replace(pos, 4, ".img");
        else img += ".img";
        GzReader ird(img);
        ird.read_exact(raw.data(), nbytes, img);
    }
    return raw;
}

template <class Fn>
inline void decode_voxels(const std::vector<char>& raw, int datatype, std::size_t nvox, Fn&& store) {
    switch (datatype) {
        case kDtUint8: {
            const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
            for (std::size_t i = 0; i < nvox; ++i) store(i, static_cast<double>(p[i]));
            break;
        }
        case kDtInt16: {
            const auto* p = reinterpret_cast<const std::int16_t*>(raw.data());
            for (std::size_t i = 0; i < nvox; ++i) store(i, static_cast<double>(p[i]));
            break;
        }
        case kDtInt32: {
            const auto* p = reinterpret_cast<const std::int32_t*>(raw.data());
            for (std::size_t i = 0; i < nvox; ++i) store(i, static_cast<double>(p[i]));
            break;
        }
        case kDtFloat32: {
            const auto* p = reinterpret_cast<const float*>(raw.data());
            for (std::size_t i = 0; i < nvox; ++i) store(i, static_cast<double>(p[i]));
            break;
        }
        case kDtFloat64: {
            const auto* p = reinterpret_cast<const double*>(raw.data());
            for (std::size_t i = 0; i < nvox; ++i) store(i, p[i]);
            break;
        }
        default: throw UnsupportedDatatype("unsupported datatype");
    }
}

inline Header header_and_grid(const std::string& path, ParsedGrid& g) {
    GzReader rd(path);
    Header h{};
    rd.read_exact(&h, sizeof h, path);
    g = parse_header(h, path);
    return h;
}

} // namespace detail

// Intensity volume from a .nii / .nii.gz file. scl_slope/scl_inter are
// applied when slope != 0.
inline Volume3D read_volume(const std::string& path) {
    detail::ParsedGrid g{};
    (void)detail::header_and_grid(path, g);
    const std::vector<char> raw = detail::read_payload(path);

    Volume3D v;
    v.dims = g.dims;
    v.spacing = g.spacing;
    v.direction = g.direction;
    v.origin = g.origin;
    v.nifti_datatype = g.datatype;
    v.data.resize(v.voxel_count());
    detail::decode_voxels(raw, g.datatype, v.voxel_count(),
                          [&](std::size_t i, double x) { v.data[i] = x; });
    if (g.scl_slope != 0.0f && !(g.scl_slope == 1.0f && g.scl_inter == 0.0f)) {
        for (auto& x : v.data) x = double(g.scl_slope) * x + double(g.scl_inter);
    }
    v.validate();
    return v;
}

// Label mask load: the caller's explicit choice, never inferred from the
// datatype alone. Requires an integer datatype; scl fields are ignored.
inline LabelMask read_mask(const std::string& path) {
    detail::ParsedGrid g{};
    (void)detail::header_and_grid(path, g);
    if (g.datatype != kDtUint8 && g.datatype != kDtInt16 && g.datatype != kDtInt32)
        throw UnsupportedDatatype("'" + path + "': masks require an integer datatype");
    const std::vector<char> raw = detail::read_payload(path);

    LabelMask m;
    m.dims = g.dims;
    m.spacing = g.spacing;
    m.direction = g.direction;
    m.origin = g.origin;
    m.nifti_datatype = g.datatype;
    m.labels.resize(m.voxel_count());
    detail::decode_voxels(raw, g.datatype, m.voxel_count(), [&](std::size_t i, double x) {
        if (x < 0.0 || x > 255.0)
            throw FormatError("'" + path + "': label value " + std::to_string(x) +
                              " outside supported range 0..255");
        m.labels[i] = static_cast<std::uint8_t>(x);
    });
    m.validate();
    return m;
}

namespace detail {

inline Header make_header(const std::array<int, 3>& dims, const std::array<double, 3>& spacing,
                          const std::array<double, 9>& direction, const std::array<double, 3>& origin,
                          int datatype) {
    Header h{};
    h.sizeof_hdr = 348;
    h.regular = 'r';
    h.dim[0] = 3;
    for (int a = 0; a < 3; ++a) h.dim[a + 1] = static_cast<std::int16_t>(dims[a]);
    for (int a = 4; a < 8; ++a) h.dim[a] = 1;
    h.datatype = static_cast<std::int16_t>(datatype);
    h.bitpix = static_cast<std::int16_t>(8 * datatype_size(datatype));
    h.pixdim[0] = 1.0f;
    for (int a = 0; a < 3; ++a) h.pixdim[a + 1] = static_cast<float>(spacing[a]);
    h.vox_offset = 352.0f;
    h.scl_slope = 0.0f; // no rescaling
    h.scl_inter = 0.0f;
    h.sform_code = 1;
    h.qform_code = 0;
    float* rows[3] = {h.srow_x, h.srow_y, h.srow_z};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
            rows[r][c] = static_cast<float>(direction[std::size_t(r * 3 + c)] * spacing[c]);
        rows[r][3] = static_cast<float>(origin[r]);
    }
    std::memcpy(h.magic, "n+1", 4);
    return h;
}

inline void encode_voxel(std::vector<char>& out, int datatype, double x) {
    switch (datatype) {
        case kDtUint8: {
            const long long v = std::llround(x);
            const std::uint8_t b = static_cast<std::uint8_t>(std::min(255LL, std::max(0LL, v)));
            out.push_back(static_cast<char>(b));
            break;
        }
        case kDtInt16: {
            const long long v = std::llround(x);
            const std::int16_t b =
                static_cast<std::int16_t>(std::min(32767LL, std::max(-32768LL, v)));
            const char* p = reinterpret_cast<const char*>(&b);
            out.insert(out.end(), p, p + 2);
            break;
        }
        case kDtInt32: {
            const long long v = std::llround(x);
            const std::int32_t b = static_cast<std::int32_t>(
                std::min<long long>(INT32_MAX, std::max<long long>(INT32_MIN, v)));
            const char* p = reinterpret_cast<const char*>(&b);
            out.insert(out.end(), p, p + 4);
            break;
        }
        case kDtFloat32: {
            const float b = static_cast<float>(x);
            const char* p = reinterpret_cast<const char*>(&b);
            out.insert(out.end(), p, p + 4);
            break;
        }
        case kDtFloat64: {
            const char* p = reinterpret_cast<const char*>(&x);
            out.insert(out.end(), p, p + 8);
            break;
        }
        default: throw UnsupportedDatatype("unsupported datatype");
    }
}

inline void write_bytes(const std::string& path, const std::vector<char>& bytes) {
    const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (gz) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot write '" + path + "'");
        std::size_t done = 0;
        while (done < bytes.size()) {
            const unsigned chunk =
                static_cast<unsigned>(std::min<std::size_t>(bytes.size() - done, 1u << 28));
            if (gzwrite(f, bytes.data() + done, chunk) != static_cast<int>(chunk)) {
                gzclose(f);
                throw IoError("write failed for '" + path + "'");
            }
            done += chunk;
        }
        if (gzclose(f) != Z_OK) throw IoError("write failed for '" + path + "'");
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for '" + path + "'");
    }
}

} // namespace detail

inline void write_volume(const Volume3D& v, const std::string& path) {
    v.validate();
    const Header h = detail::make_header(v.dims, v.spacing, v.direction, v.origin, v.nifti_datatype);
    std::vector<char> bytes;
    bytes.reserve(352 + v.voxel_count() * std::size_t(datatype_size(v.nifti_datatype)));
    const char* hp = reinterpret_cast<const char*>(&h);
    bytes.insert(bytes.end(), hp, hp + sizeof h);
    bytes.insert(bytes.end(), 4, '\0'); // empty extension block
    for (double x : v.data) detail::encode_voxel(bytes, v.nifti_datatype, x);
    detail::write_bytes(path, bytes);
}

inline void write_mask(const LabelMask& m, const std::string& path) {
    m.validate();
    if (m.nifti_datatype != kDtUint8 && m.nifti_datatype != kDtInt16 && m.nifti_datatype != kDtInt32)
        throw UnsupportedDatatype("mask datatype must be integer");
    const Header h = detail::make_header(m.dims, m.spacing, m.direction, m.origin, m.nifti_datatype);
    std::vector<char> bytes;
    bytes.reserve(352 + m.voxel_count() * std::size_t(datatype_size(m.nifti_datatype)));
    const char* hp = reinterpret_cast<const char*>(&h);
    bytes.insert(bytes.end(), hp, hp + sizeof h);
    bytes.insert(bytes.end(), 4, '\0');
    for (auto x : m.labels) detail::encode_voxel(bytes, m.nifti_datatype, double(x));
    detail::write_bytes(path, bytes);
}

} // namespace nifti
} // namespace chemoresp
