#pragma once

#include "kerrlab/error.hpp"

namespace testing {

/// True when `f` throws kerrlab::Error of the given kind.
template <class F>
bool throws_kind(F&& f, kerrlab::ErrorKind kind) {
    try {
        f();
    } catch (const kerrlab::Error& e) {
        return e.kind() == kind;
    } catch (...) {
        return false;
    }
    return false;
}

}  // namespace testing
