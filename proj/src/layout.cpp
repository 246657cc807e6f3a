#include "kerrlab/layout.hpp"

#include <algorithm>
#include <set>

#include "kerrlab/error.hpp"

namespace kerrlab {

Mode Mode::bosonic(int cutoff, std::string name) {
    if (cutoff < 1) {
        throw Error(ErrorKind::invalid_argument, "bosonic cutoff must be >= 1, got " + std::to_string(cutoff));
    }
    return Mode{ModeKind::bosonic, cutoff, std::move(name)};
}

Mode Mode::qubit(std::string name) { return Mode{ModeKind::qubit, 1, std::move(name)}; }

ModeLayout::ModeLayout(std::vector<Mode> modes) : modes_(std::move(modes)) {
    std::set<std::string> names;
    for (const auto& m : modes_) {
        if (m.kind == ModeKind::bosonic && m.cutoff < 1) {
            throw Error(ErrorKind::invalid_argument, "bosonic cutoff must be >= 1");
        }
        if (!m.name.empty() && !names.insert(m.name).second) {
            throw Error(ErrorKind::layout_conflict, "duplicate mode name '" + m.name + "'");
        }
    }
    strides_.assign(modes_.size(), 1);
    total_dim_ = 1;
    for (std::size_t i = modes_.size(); i-- > 0;) {
        strides_[i] = total_dim_;
        total_dim_ *= modes_[i].dim();
    }
}

std::vector<std::size_t> ModeLayout::digits(std::size_t index) const {
    std::vector<std::size_t> d(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        d[i] = (index / strides_[i]) % modes_[i].dim();
    }
    return d;
}

std::size_t ModeLayout::index(const std::vector<std::size_t>& digits) const {
    if (digits.size() != modes_.size()) {
        throw Error(ErrorKind::dimension_mismatch, "digit count does not match mode count");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (digits[i] >= modes_[i].dim()) {
            throw Error(ErrorKind::index_out_of_range, "digit exceeds mode dimension");
        }
        idx += digits[i] * strides_[i];
    }
    return idx;
}

std::size_t ModeLayout::find(const std::string& name) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].name == name) return i;
    }
    throw Error(ErrorKind::index_out_of_range, "no mode named '" + name + "'");
}

ModeLayout ModeLayout::select(const std::vector<std::size_t>& keep) const {
    std::vector<Mode> out;
    out.reserve(keep.size());
    for (auto k : keep) {
        if (k >= modes_.size()) throw Error(ErrorKind::index_out_of_range, "mode index out of range");
        out.push_back(modes_[k]);
    }
    return ModeLayout(std::move(out));
}

ModeLayout ModeLayout::concat(const ModeLayout& other) const {
    std::vector<Mode> out = modes_;
    out.insert(out.end(), other.modes_.begin(), other.modes_.end());
    return ModeLayout(std::move(out));
}

SubspaceIndex subspace_index(const ModeLayout& layout, const std::vector<std::size_t>& targets) {
    std::vector<bool> is_target(layout.size(), false);
    for (auto t : targets) {
        if (t >= layout.size()) throw Error(ErrorKind::index_out_of_range, "target mode out of range");
        if (is_target[t]) throw Error(ErrorKind::layout_conflict, "target mode listed twice");
        is_target[t] = true;
    }

    // Mixed-radix enumeration over a list of (dim, stride) pairs.
    auto enumerate = [](const std::vector<std::pair<std::size_t, std::size_t>>& radix) {
        std::size_t count = 1;
        for (const auto& r : radix) count *= r.first;
        std::vector<std::size_t> offsets(count, 0);
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t rem = k;
            std::size_t off = 0;
            for (std::size_t i = radix.size(); i-- > 0;) {
                off += (rem % radix[i].first) * radix[i].second;
                rem /= radix[i].first;
            }
            offsets[k] = off;
        }
        return offsets;
    };

    std::vector<std::pair<std::size_t, std::size_t>> local_radix, rest_radix;
    for (auto t : targets) local_radix.emplace_back(layout.dim(t), layout.stride(t));
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (!is_target[i]) rest_radix.emplace_back(layout.dim(i), layout.stride(i));
    }
    return SubspaceIndex{enumerate(local_radix), enumerate(rest_radix)};
}

}  // namespace kerrlab
