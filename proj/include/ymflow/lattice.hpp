#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ymflow {

enum class BoundaryMode { Frozen, Free };

// One traversal step of a plaquette boundary: link (site, dir), sign +1 if
// traversed forward, -1 if traversed against its orientation.
struct LinkRef {
    int site;
    int dir;
    int sign;
};

// Cylinder lattice: direction 0 is the interval axis (open; realized with
// end slabs that are frozen or free), directions 1..3 are periodic.
// Site/link/plaquette indexing is fully combinatorial (torus), so counting
// is uniform; openness of the axis enters through plaquette weights
// (seam plaquettes carry weight 0) and the frozen masks.
class LatticeGeometry {
public:
    LatticeGeometry(std::array<int, 4> dims, BoundaryMode low, BoundaryMode high,
                    int frozen_depth, std::array<int, 3> twist);

    const std::array<int, 4>& dims() const { return dims_; }
    BoundaryMode low_mode() const { return low_; }
    BoundaryMode high_mode() const { return high_; }
    int frozen_depth() const { return frozen_depth_; }
    // twist bits m_12, m_13, m_23
    const std::array<int, 3>& twist() const { return twist_; }
    int twist_bit(int mu, int nu) const; // mu < nu, both spatial

    int n_sites() const { return n_sites_; }
    int n_links() const { return 4 * n_sites_; }
    int n_plaquettes() const { return 6 * n_sites_; }

    int site_index(const std::array<int, 4>& c) const;
    std::array<int, 4> site_coords(int s) const;
    int shift(int site, int dir, int step) const; // periodic in every dir

    int link_index(int site, int dir) const { return 4 * site + dir; }
    int link_site(int l) const { return l / 4; }
    int link_dir(int l) const { return l % 4; }

    // plane index p in [0,6): (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    static std::array<int, 2> plane_dirs(int p);
    static int plane_index(int mu, int nu); // mu < nu
    int plaquette_index(int site, int plane) const { return 6 * site + plane; }
    int plaquette_site(int q) const { return q / 6; }
    int plaquette_plane(int q) const { return q % 6; }

    // Boundary links of a plaquette in traversal order (counterclockwise).
    std::array<LinkRef, 4> plaquette_links(int q) const;

    // The 6 plaquettes containing a given link.
    std::array<int, 6> plaquettes_of_link(int l) const;

    // +1 normally, -1 on marked ('t Hooft twisted) plaquettes, 0 on seam
    // plaquettes excluded by the open axis.
    double plaquette_weight(int q) const { return weight_[q]; }
    bool plaquette_marked(int q) const { return weight_[q] < 0.0; }

    bool site_frozen(int site) const { return frozen_site_[site]; }
    // A link is frozen iff both of its end sites are frozen.
    bool link_frozen(int site, int dir) const {
        return frozen_site_[site] && frozen_site_[shift(site, dir, 1)];
    }
    bool link_frozen(int l) const { return link_frozen(link_site(l), link_dir(l)); }

    // Sites within Euclidean distance `radius` of center; spatial directions
    // use the minimal periodic image, the axis direction does not wrap.
    std::vector<int> ball_sites(int center, double radius) const;

    int n_marked_plaquettes() const;

private:
    std::array<int, 4> dims_;
    BoundaryMode low_, high_;
    int frozen_depth_;
    std::array<int, 3> twist_;
    int n_sites_;
    std::vector<double> weight_;
    std::vector<char> frozen_site_;
};

} // namespace ymflow
