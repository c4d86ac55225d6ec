#pragma once

namespace gkdv {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestFormat = "gkdv-run-manifest";
}  // namespace gkdv
