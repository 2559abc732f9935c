#include "bhs/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "bhs/errors.hpp"

namespace bhs {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload assumes a little-endian host");

std::string rep_name(FieldRep rep) {
  return rep == FieldRep::Position ? "position" : "spectrum";
}

FieldRep rep_from_name(const std::string& name) {
  if (name == "position") return FieldRep::Position;
  if (name == "spectrum") return FieldRep::Spectrum;
  throw ValidationError("checkpoint: unknown representation '" + name + "'");
}

}  // namespace

void write_checkpoint(const std::string& path, const ComplexField& field,
                      double time, std::optional<std::int64_t> step) {
  const GridSpec& g = field.grid();
  std::ostringstream header;
  header << "format: field-checkpoint v1\n";
  header << "dim: " << g.dim << "\n";
  header << "points:";
  for (int a = 0; a < g.dim; ++a) header << ' ' << g.points[a];
  header << "\n";
  header << "box_length:";
  char buf[64];
  for (int a = 0; a < g.dim; ++a) {
    std::snprintf(buf, sizeof buf, " %.17g", g.box_length[a]);
    header << buf;
  }
  header << "\n";
  header << "rep: " << rep_name(field.rep()) << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", time);
  header << "time: " << buf << "\n";
  if (step) header << "step: " << *step << "\n";
  header << "\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AbortError("checkpoint: cannot open '" + path + "' for writing");
  const std::string h = header.str();
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(std::complex<double>)));
  out.flush();
  if (!out) throw AbortError("checkpoint: short write to '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AbortError("checkpoint: cannot open '" + path + "' for reading");

  GridSpec g;
  g.dim = 0;
  FieldRep rep = FieldRep::Position;
  Checkpoint ck{ComplexField(), 1.0, std::nullopt};
  bool saw_points = false, saw_box = false, saw_time = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;  // header/payload separator
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ValidationError("checkpoint: malformed header line '" + line + "'");
    const std::string key = line.substr(0, colon);
    std::istringstream val(line.substr(colon + 1));
    if (key == "format") {
      std::string tag, ver;
      val >> tag >> ver;
      if (tag != "field-checkpoint")
        throw ValidationError("checkpoint: unexpected format tag '" + tag + "'");
    } else if (key == "dim") {
      val >> g.dim;
    } else if (key == "points") {
      for (int a = 0; a < g.dim; ++a)
        if (!(val >> g.points[a]))
          throw ValidationError("checkpoint: points row shorter than dim");
      saw_points = true;
    } else if (key == "box_length") {
      for (int a = 0; a < g.dim; ++a)
        if (!(val >> g.box_length[a]))
          throw ValidationError("checkpoint: box_length row shorter than dim");
      saw_box = true;
    } else if (key == "rep") {
      std::string name;
      val >> name;
      rep = rep_from_name(name);
    } else if (key == "time") {
      val >> ck.time;
      saw_time = true;
    } else if (key == "step") {
      std::int64_t s = 0;
      val >> s;
      ck.step = s;
    }
    // Unknown keys are ignored for forward compatibility.
  }
  if (g.dim < 1 || g.dim > 3 || !saw_points || !saw_box || !saw_time)
    throw ValidationError("checkpoint: incomplete header in '" + path + "'");
  GridSpec grid = make_grid(g.dim, g.points, g.box_length);

  ComplexField f(grid, rep);
  in.read(reinterpret_cast<char*>(f.data()),
          static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)));
  if (in.gcount() !=
      static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)))
    throw AbortError("checkpoint: payload in '" + path + "' shorter than grid size");
  ck.field = std::move(f);
  return ck;
}

}  // namespace bhs
