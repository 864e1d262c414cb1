#pragma once

#include <memory>
#include <vector>

#include "mmf/frames/frames.hpp"
#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/sem/fields.hpp"
#include "mmf/sem/geometry.hpp"

namespace mmf {

// Everything a scheme needs on one mesh at one solution order.
struct SurfaceDiscretization {
  std::shared_ptr<const HighOrderMesh> mesh;
  ReferenceElement ref;
  ElementGeometry geom;
  MovingFrameField frames;
  ConnectionField conn;
  std::vector<char> active;  // elements included in error norms

  int order() const { return ref.order(); }
  int num_nodes() const { return geom.num_nodes(); }
  int npe() const { return geom.npe; }
  int n_elements() const { return geom.n_elements; }
};

// Spherical alignment excludes the pole-cap elements (they carry Local frames
// and are left out of error norms).
inline SurfaceDiscretization make_discretization(std::shared_ptr<const HighOrderMesh> mesh, int p,
                                                 FrameAlignment alignment = FrameAlignment::Local) {
  SurfaceDiscretization d{mesh, ReferenceElement(p), {}, {}, {}, {}};
  d.geom = compute_geometry(*mesh, d.ref);
  if (alignment == FrameAlignment::Spherical) {
    d.active = pole_cap_mask(mesh->linear);
    bool any = false;
    for (char a : d.active) any = any || a;
    if (!any) throw PoleProximity("pole-cap exclusion leaves no elements for spherical frames");
  } else {
    d.active.assign(mesh->num_elements(), 1);
  }
  d.frames = build_frames(d.geom, alignment, d.active);
  d.conn = build_connections(d.frames, d.geom, d.ref);
  return d;
}

inline SurfaceDiscretization make_discretization(const HighOrderMesh& mesh, int p,
                                                 FrameAlignment alignment = FrameAlignment::Local) {
  return make_discretization(std::make_shared<const HighOrderMesh>(mesh), p, alignment);
}

}  // namespace mmf
