#pragma once

#include <array>
#include <string>

#include "chemoresp/errors.hpp"
#include "chemoresp/volume.hpp"

namespace chemoresp {

// Merged-mask label codes (file format contract).
constexpr std::uint8_t kLabelBackground = 0;
constexpr std::uint8_t kLabelET = 1;
constexpr std::uint8_t kLabelNET = 2;
constexpr std::uint8_t kLabelCC = 3;
constexpr std::uint8_t kLabelED = 4;

// Binary outputs of the two upstream segmentation models: one emits the
// mutually exclusive ET/CC/ED subregions, the other the whole tumor.
struct SubregionMasks {
    LabelMask et;
    LabelMask cc;
    LabelMask ed;
    LabelMask wt;

    void validate() const {
        et.validate();
        cc.validate();
        ed.validate();
        wt.validate();
        require_congruent(et, cc, "et vs cc");
        require_congruent(et, ed, "et vs ed");
        require_congruent(et, wt, "et vs wt");
        et.validate_labels(1);
        cc.validate_labels(1);
        ed.validate_labels(1);
        wt.validate_labels(1);
        for (std::size_t i = 0; i < et.labels.size(); ++i) {
            const int hits = (et.labels[i] != 0) + (cc.labels[i] != 0) + (ed.labels[i] != 0);
            if (hits > 1)
                throw DisjointnessError("et/cc/ed overlap at linear voxel " + std::to_string(i));
        }
    }
};

// Four-label mask over {0, ET, NET, CC, ED}.
struct MergedSegmentation {
    LabelMask labels;
};

// Merge rule: ET/CC/ED carry through with their subregion label (also when
// they fall outside the whole-tumor prediction); whole-tumor voxels covered
// by none of the three become NET; everything else is background.
inline MergedSegmentation merge_masks(const SubregionMasks& m) {
    m.validate();
    MergedSegmentation out;
    out.labels.dims = m.et.dims;
    out.labels.spacing = m.et.spacing;
    out.labels.direction = m.et.direction;
    out.labels.origin = m.et.origin;
    out.labels.nifti_datatype = kDtUint8;
    out.labels.labels.resize(m.et.labels.size());
    for (std::size_t i = 0; i < m.et.labels.size(); ++i) {
        std::uint8_t v = kLabelBackground;
        if (m.et.labels[i]) v = kLabelET;
        else if (m.cc.labels[i]) v = kLabelCC;
        else if (m.ed.labels[i]) v = kLabelED;
        else if (m.wt.labels[i]) v = kLabelNET;
        out.labels.labels[i] = v;
    }
    return out;
}

// Combined whole-tumor mask used as the radiomics ROI.
inline LabelMask recombine_wt(const MergedSegmentation& s) {
    s.labels.validate();
    s.labels.validate_labels(kLabelED);
    LabelMask out = s.labels;
    for (auto& v : out.labels) v = (v != kLabelBackground) ? 1 : 0;
    return out;
}

// Indicator channel per label, order ET, NET, CC, ED.
inline std::array<LabelMask, 4> one_hot(const MergedSegmentation& s) {
    s.labels.validate();
    s.labels.validate_labels(kLabelED);
    std::array<LabelMask, 4> out{s.labels, s.labels, s.labels, s.labels};
    constexpr std::uint8_t codes[4] = {kLabelET, kLabelNET, kLabelCC, kLabelED};
    for (int c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < s.labels.labels.size(); ++i)
            out[std::size_t(c)].labels[i] = (s.labels.labels[i] == codes[c]) ? 1 : 0;
    return out;
}

// One patient's co-registered inputs.
struct CaseBundle {
    std::string case_id;
    Volume3D t1;
    Volume3D t1ce;
    Volume3D t2;
    Volume3D flair;
    SubregionMasks masks;

    void validate() const {
        t1.validate();
        t1ce.validate();
        t2.validate();
        flair.validate();
        masks.validate();
        require_congruent(t1, t1ce, "t1 vs t1ce");
        require_congruent(t1, t2, "t1 vs t2");
        require_congruent(t1, flair, "t1 vs flair");
        require_congruent(t1, masks.et, "sequences vs masks");
    }
};

} // namespace chemoresp
