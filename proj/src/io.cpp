#include "flatstrata/io.hpp"

#include <fstream>
#include <sstream>

#include "flatstrata/errors.hpp"

namespace flatstrata {

json surface_to_json(const TranslationSurface& s)
{
    json j;
    j["format"] = kSurfaceFormat;
    j["triangles"] = json::array();
    for (const auto& tri : s.gluing().triangles)
        j["triangles"].push_back({tri[0], tri[1], tri[2]});
    j["edge_vectors"] = json::array();
    for (const Complex& v : s.edge_vectors())
        j["edge_vectors"].push_back({v.real(), v.imag()});
    j["marked"] = s.marked();
    return j;
}

SurfaceDocument parse_surface_document(const json& j)
{
    SurfaceDocument doc;
    try {
        if (j.contains("format") && j["format"] != kSurfaceFormat && j["format"] != kHalfSurfaceFormat)
            fail("ParseError", "unsupported format tag " + j["format"].dump());
        for (const auto& tri : j.at("triangles")) {
            if (!tri.is_array() || tri.size() != 3)
                fail("ParseError", "each triangle must list three signed edges");
            doc.gluing.triangles.push_back({tri[0].get<int>(), tri[1].get<int>(), tri[2].get<int>()});
        }
        for (const auto& v : j.at("edge_vectors")) {
            if (!v.is_array() || v.size() != 2)
                fail("ParseError", "each edge vector must be a [re, im] pair");
            doc.edge_vectors.emplace_back(v[0].get<double>(), v[1].get<double>());
        }
        if (j.contains("marked"))
            doc.marked = j["marked"].get<std::vector<int>>();
    } catch (const json::exception& e) {
        fail("ParseError", std::string("malformed surface document: ") + e.what());
    }
    return doc;
}

TranslationSurface surface_from_json(const json& j)
{
    SurfaceDocument doc = parse_surface_document(j);
    return build_surface(doc.gluing, doc.edge_vectors, doc.marked);
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail("IOError", "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        fail("ParseError", path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        fail("IOError", "cannot write " + path);
    out << text;
    if (!out)
        fail("IOError", "write failed for " + path);
}

} // namespace flatstrata
