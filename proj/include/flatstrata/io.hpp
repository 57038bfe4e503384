#pragma once

#include <string>

#include <json.hpp>

#include "flatstrata/surface.hpp"

namespace flatstrata {

using json = nlohmann::json;

inline constexpr const char* kSurfaceFormat = "flatstrata-surface/1";
inline constexpr const char* kHalfSurfaceFormat = "flatstrata-halfsurface/1";

json surface_to_json(const TranslationSurface& s);
// Throws Error("ParseError") on malformed documents and the build_surface
// errors on geometrically invalid ones.
TranslationSurface surface_from_json(const json& j);

// Raw (unvalidated) pieces of a surface document, used by `validate` so that
// geometric failures can be reported with their own error kinds.
struct SurfaceDocument {
    TriangleGluing gluing;
    std::vector<Complex> edge_vectors;
    std::vector<int> marked;
};
SurfaceDocument parse_surface_document(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace flatstrata
