#include "gkdv/rng.hpp"

// header-only; translation unit kept so the target owns the header
