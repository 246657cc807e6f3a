#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kerrlab {

enum class ModeKind { bosonic, qubit };

/// One tensor factor of the Hilbert space. A bosonic mode stores photon
/// numbers 0..cutoff; a qubit mode is a polarization with basis order (H, V).
struct Mode {
    ModeKind kind = ModeKind::bosonic;
    int cutoff = 0;
    std::string name;

    static Mode bosonic(int cutoff, std::string name = {});
    static Mode qubit(std::string name = {});

    std::size_t dim() const { return kind == ModeKind::qubit ? 2 : static_cast<std::size_t>(cutoff) + 1; }

    bool operator==(const Mode&) const = default;
};

/// Ordered list of modes. Basis indices are row-major over the declared
/// order, so the last mode varies fastest.
class ModeLayout {
public:
    ModeLayout() = default;
    explicit ModeLayout(std::vector<Mode> modes);

    std::size_t size() const { return modes_.size(); }
    const Mode& operator[](std::size_t i) const { return modes_.at(i); }
    const std::vector<Mode>& modes() const { return modes_; }

    std::size_t dim(std::size_t mode) const { return modes_.at(mode).dim(); }
    std::size_t stride(std::size_t mode) const { return strides_.at(mode); }
    std::size_t total_dim() const { return total_dim_; }

    /// Per-mode occupation digits of a flat basis index.
    std::vector<std::size_t> digits(std::size_t index) const;
    std::size_t index(const std::vector<std::size_t>& digits) const;

    /// Index of the mode carrying `name`; throws IndexOutOfRange.
    std::size_t find(const std::string& name) const;

    /// Layout restricted to `keep`, in the order given.
    ModeLayout select(const std::vector<std::size_t>& keep) const;

    /// Concatenation; named modes must not collide.
    ModeLayout concat(const ModeLayout& other) const;

    bool operator==(const ModeLayout& other) const { return modes_ == other.modes_; }

private:
    std::vector<Mode> modes_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_ = 1;
};

/// Flat offsets used to address a subset of modes inside a larger layout.
/// `local[k]` is the offset of the k-th row-major basis state of the target
/// modes; `rest[j]` enumerates every basis state of the complementary modes.
/// Every full index is exactly `rest[j] + local[k]`.
struct SubspaceIndex {
    std::vector<std::size_t> local;
    std::vector<std::size_t> rest;
};

SubspaceIndex subspace_index(const ModeLayout& layout, const std::vector<std::size_t>& targets);

}  // namespace kerrlab
