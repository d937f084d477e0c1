//! Triangulated surfaces with vertices on the hyperboloid: hyperbolic area
//! by angle defect, projected-gradient area minimization (the brute-force
//! oracle for the closed-form areas elsewhere in the crate), and numerical
//! verification of the coarea formula.
//!
//! Meshes are plain index structures. Quotient annuli carry a seam
//! identification: pairs of vertices related by the loxodromic deck
//! transformation, which move in lockstep during minimization. The JSON
//! interchange format stores only the pairs; reattach the deck motion with
//! [`TriMesh::with_deck`] before minimizing a deserialized mesh.

use std::f64::consts::TAU;

use crate::isometry::{distance_hyperboloid, GeodesicLine, HyperboloidPoint, Vec4};
use crate::{tolerances, Error, Result};

/// Screw motion along the standard axis `(cosh v, sinh v, 0, 0)`:
/// a boost by `l` in the `(x₁x₂)`-plane composed with a rotation by `θ` in
/// the `(x₃x₄)`-plane. This is the hyperboloid form of the loxodromic map
/// with complex length `l + iθ`.
#[derive(Clone, Copy, Debug)]
pub struct ScrewMotion {
    pub l: f64,
    pub theta: f64,
}

impl ScrewMotion {
    pub fn new(l: f64, theta: f64) -> Self {
        ScrewMotion { l, theta }
    }

    pub fn inverse(&self) -> ScrewMotion {
        ScrewMotion { l: -self.l, theta: -self.theta }
    }

    /// Linear action on 4-vectors (isometry of the Lorentzian product).
    pub fn apply_vec(&self, v: &Vec4) -> Vec4 {
        let (ch, sh) = (self.l.cosh(), self.l.sinh());
        let (st, ct) = self.theta.sin_cos();
        Vec4::new(
            ch * v.x1 + sh * v.x2,
            sh * v.x1 + ch * v.x2,
            ct * v.x3 - st * v.x4,
            st * v.x3 + ct * v.x4,
        )
    }

    pub fn apply(&self, p: &HyperboloidPoint) -> HyperboloidPoint {
        let v = self.apply_vec(&p.vec());
        HyperboloidPoint { x1: v.x1, x2: v.x2, x3: v.x3, x4: v.x4 }
    }
}

/// Seam vertices of a quotient mesh: `pairs[(i, j)]` states that vertex `j`
/// is the deck image of vertex `i`. The deck motion itself is not part of
/// the interchange format and may be absent on deserialized meshes.
#[derive(Clone, Debug)]
pub struct SeamIdentification {
    pub pairs: Vec<(usize, usize)>,
    pub deck: Option<ScrewMotion>,
}

/// A triangulated surface on the hyperboloid.
#[derive(Clone, Debug)]
pub struct TriMesh {
    pub vertices: Vec<HyperboloidPoint>,
    pub faces: Vec<[usize; 3]>,
    /// Boundary-constraint flag per vertex; fixed vertices never move.
    pub fixed: Vec<bool>,
    pub identification: Option<SeamIdentification>,
}

impl TriMesh {
    pub fn new(
        vertices: Vec<HyperboloidPoint>,
        faces: Vec<[usize; 3]>,
        fixed: Vec<bool>,
        identification: Option<SeamIdentification>,
    ) -> Result<Self> {
        let mesh = TriMesh { vertices, faces, fixed, identification };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Check the structural invariants: index validity, the hyperboloid
    /// constraint per vertex, and seam consistency when a deck motion is
    /// attached.
    pub fn validate(&self) -> Result<()> {
        if self.fixed.len() != self.vertices.len() {
            return Err(Error::MeshFormat(format!(
                "fixed flags ({}) do not match vertex count ({})",
                self.fixed.len(),
                self.vertices.len()
            )));
        }
        for (fi, f) in self.faces.iter().enumerate() {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::MeshFormat(format!("face {fi} repeats a vertex")));
            }
            for &ix in f {
                if ix >= self.vertices.len() {
                    return Err(Error::MeshFormat(format!(
                        "face {fi} references vertex {ix} out of {}",
                        self.vertices.len()
                    )));
                }
            }
        }
        for (vi, p) in self.vertices.iter().enumerate() {
            let v = p.vec();
            let residual = (v.lorentz_dot(&v) + 1.0).abs();
            if residual > tolerances::HYPERBOLOID_CONSTRAINT * v.euclid_norm().powi(2).max(1.0) {
                return Err(Error::MeshFormat(format!(
                    "vertex {vi} off the hyperboloid by {residual:e}"
                )));
            }
        }
        if let Some(seam) = &self.identification {
            for &(i, j) in &seam.pairs {
                if i >= self.vertices.len() || j >= self.vertices.len() {
                    return Err(Error::MeshFormat(format!("seam pair ({i}, {j}) out of range")));
                }
            }
            if let Some(deck) = &seam.deck {
                for &(i, j) in &seam.pairs {
                    let image = deck.apply(&self.vertices[i]);
                    let err = (image.vec() - self.vertices[j].vec()).euclid_norm();
                    if err > tolerances::MESH_SEAM {
                        return Err(Error::MeshFormat(format!(
                            "seam pair ({i}, {j}) disagrees with the deck motion by {err:e}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Attach (or replace) the deck motion of the seam identification and
    /// re-validate the pairing.
    pub fn with_deck(mut self, deck: ScrewMotion) -> Result<Self> {
        match &mut self.identification {
            Some(seam) => seam.deck = Some(deck),
            None => {
                return Err(Error::MeshFormat(
                    "mesh has no seam identification to attach a deck motion to".into(),
                ))
            }
        }
        self.validate()?;
        Ok(self)
    }

    /// Serialize to the interchange JSON (17 significant digits):
    /// `{"vertices": [[x1,x2,x3,x4],...], "faces": [[i,j,k],...],
    ///   "fixed": [bool,...], "identification": [[i,j],...] or null}`.
    pub fn to_json_string(&self) -> String {
        let mut out = String::with_capacity(64 * self.vertices.len());
        out.push_str("{\"vertices\":[");
        for (k, p) in self.vertices.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "[{},{},{},{}]",
                fmt17(p.x1),
                fmt17(p.x2),
                fmt17(p.x3),
                fmt17(p.x4)
            ));
        }
        out.push_str("],\"faces\":[");
        for (k, f) in self.faces.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{},{}]", f[0], f[1], f[2]));
        }
        out.push_str("],\"fixed\":[");
        for (k, b) in self.fixed.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(if *b { "true" } else { "false" });
        }
        out.push_str("],\"identification\":");
        match &self.identification {
            None => out.push_str("null"),
            Some(seam) => {
                out.push('[');
                for (k, (i, j)) in seam.pairs.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    out.push_str(&format!("[{i},{j}]"));
                }
                out.push(']');
            }
        }
        out.push('}');
        out
    }

    /// Parse the interchange JSON. The deck motion is not part of the
    /// format; the seam comes back with `deck = None`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct MeshFile {
            vertices: Vec<[f64; 4]>,
            faces: Vec<[usize; 3]>,
            fixed: Vec<bool>,
            identification: Option<Vec<[usize; 2]>>,
        }
        let file: MeshFile =
            serde_json::from_str(text).map_err(|e| Error::MeshFormat(e.to_string()))?;
        let vertices = file
            .vertices
            .into_iter()
            .map(|[x1, x2, x3, x4]| HyperboloidPoint::new(x1, x2, x3, x4))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::MeshFormat(e.to_string()))?;
        let identification = file.identification.map(|pairs| SeamIdentification {
            pairs: pairs.into_iter().map(|[i, j]| (i, j)).collect(),
            deck: None,
        });
        TriMesh::new(vertices, file.faces, file.fixed, identification)
    }
}

/// 17 significant digits, enough for a lossless `f64` round trip.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fundamental-domain mesh of the quotient annulus of the pitch-`θ/l`
/// helicoid inside the radius-`r` tube: an `m×n` grid over
/// `u ∈ [-r, r]`, `v ∈ [0, l]`, with the `v = 0` and `v = l` columns
/// identified by the deck motion and the rows `u = ±r` fixed.
pub fn build_helicoid_annulus_mesh(
    l: f64,
    theta: f64,
    r: f64,
    m: usize,
    n: usize,
) -> Result<TriMesh> {
    if m < 4 || n < 4 {
        return Err(Error::InvalidArgument(format!("grid {m}×{n} below minimum 4×4")));
    }
    if !crate::positive_finite(l) || !crate::positive_finite(r) || theta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "degenerate annulus parameters (l, θ, r) = ({l}, {theta}, {r})"
        )));
    }
    let a = theta / l;
    let vid = |i: usize, j: usize| i * (n + 1) + j;
    let mut vertices = Vec::with_capacity((m + 1) * (n + 1));
    let mut fixed = Vec::with_capacity((m + 1) * (n + 1));
    for i in 0..=m {
        let u = -r + 2.0 * r * i as f64 / m as f64;
        for j in 0..=n {
            let v = l * j as f64 / n as f64;
            vertices.push(crate::helicoid::helicoid_point(a, u, v));
            fixed.push(i == 0 || i == m);
        }
    }
    let mut faces = Vec::with_capacity(2 * m * n);
    for i in 0..m {
        for j in 0..n {
            faces.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
            faces.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    let pairs = (0..=m).map(|i| (vid(i, 0), vid(i, n))).collect();
    let seam = SeamIdentification { pairs, deck: Some(ScrewMotion::new(l, theta)) };
    TriMesh::new(vertices, faces, fixed, Some(seam))
}

/// Polar mesh of the totally geodesic disk `exp_center(span{w1, w2})` of
/// radius `r`: `m` radial rings of `n` vertices around a center vertex,
/// boundary ring fixed. `w1`, `w2` must be Lorentz-orthonormal tangent
/// vectors at `center`.
pub fn build_geodesic_disk_mesh(
    center: &HyperboloidPoint,
    w1: &Vec4,
    w2: &Vec4,
    r: f64,
    m: usize,
    n: usize,
) -> Result<TriMesh> {
    if m < 4 || n < 4 {
        return Err(Error::InvalidArgument(format!("grid {m}×{n} below minimum 4×4")));
    }
    if !crate::positive_finite(r) {
        return Err(Error::InvalidArgument(format!("disk radius {r} must be positive")));
    }
    let c = center.vec();
    for (name, w) in [("w1", w1), ("w2", w2)] {
        if (w.lorentz_dot(w) - 1.0).abs() > 1e-9 || w.lorentz_dot(&c).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "{name} is not a unit tangent vector at the center"
            )));
        }
    }
    if w1.lorentz_dot(w2).abs() > 1e-9 {
        return Err(Error::InvalidArgument("w1 and w2 are not orthogonal".into()));
    }
    let mut vertices = vec![*center];
    let mut fixed = vec![false];
    for i in 1..=m {
        let s = r * i as f64 / m as f64;
        for j in 0..n {
            let phi = TAU * j as f64 / n as f64;
            let dir = *w1 * phi.cos() + *w2 * phi.sin();
            let v = c * s.cosh() + dir * s.sinh();
            vertices.push(HyperboloidPoint::project(v)?);
            fixed.push(i == m);
        }
    }
    let vid = |i: usize, j: usize| if i == 0 { 0 } else { 1 + (i - 1) * n + (j % n) };
    let mut faces = Vec::with_capacity(2 * m * n);
    for j in 0..n {
        faces.push([0, vid(1, j), vid(1, j + 1)]);
    }
    for i in 1..m {
        for j in 0..n {
            faces.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
            faces.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    TriMesh::new(vertices, faces, fixed, None)
}

/// Meridian disk of radius `r` orthogonal to the standard axis at the base
/// point: the polar mesh on `span{e₃, e₄}`.
pub fn build_meridian_disk_mesh(r: f64, m: usize, n: usize) -> Result<TriMesh> {
    build_geodesic_disk_mesh(
        &HyperboloidPoint::base(),
        &Vec4::new(0.0, 0.0, 1.0, 0.0),
        &Vec4::new(0.0, 0.0, 0.0, 1.0),
        r,
        m,
        n,
    )
}

/// Area of the geodesic triangle with the given vertices, as the angle
/// defect `π - (α + β + γ)` with angles from the hyperbolic law of cosines.
pub fn triangle_area(p0: &HyperboloidPoint, p1: &HyperboloidPoint, p2: &HyperboloidPoint) -> Result<f64> {
    triangle_area_impl(p0, p1, p2, usize::MAX)
}

fn triangle_area_impl(
    p0: &HyperboloidPoint,
    p1: &HyperboloidPoint,
    p2: &HyperboloidPoint,
    face: usize,
) -> Result<f64> {
    let a = distance_hyperboloid(p1, p2);
    let b = distance_hyperboloid(p0, p2);
    let c = distance_hyperboloid(p0, p1);
    let angle = |opp: f64, s1: f64, s2: f64| -> Result<f64> {
        let denom = s1.sinh() * s2.sinh();
        if denom <= 0.0 {
            return Err(Error::DegenerateFace { face });
        }
        let cos = (s1.cosh() * s2.cosh() - opp.cosh()) / denom;
        if cos.abs() > 1.0 + 1e-7 {
            return Err(Error::DegenerateFace { face });
        }
        Ok(cos.clamp(-1.0, 1.0).acos())
    };
    let alpha = angle(a, b, c)?;
    let beta = angle(b, a, c)?;
    let gamma = angle(c, a, b)?;
    Ok((std::f64::consts::PI - alpha - beta - gamma).max(0.0))
}

// Tolerant variant used on clipped slivers, where crossing points can land
// on top of a vertex: near-zero sides contribute near-zero area.
fn triangle_area_tolerant(
    p0: &HyperboloidPoint,
    p1: &HyperboloidPoint,
    p2: &HyperboloidPoint,
) -> f64 {
    let a = distance_hyperboloid(p1, p2);
    let b = distance_hyperboloid(p0, p2);
    let c = distance_hyperboloid(p0, p1);
    if a.min(b).min(c) < 1e-12 {
        return 0.0;
    }
    triangle_area_impl(p0, p1, p2, usize::MAX).unwrap_or(0.0)
}

/// Total hyperbolic area of the mesh: the sum of per-face angle defects.
pub fn mesh_area(mesh: &TriMesh) -> Result<f64> {
    let mut total = 0.0;
    for (fi, f) in mesh.faces.iter().enumerate() {
        total += triangle_area_impl(
            &mesh.vertices[f[0]],
            &mesh.vertices[f[1]],
            &mesh.vertices[f[2]],
            fi,
        )?;
    }
    Ok(total)
}

/// Area of the mesh under a radial conformal rescaling of the metric: each
/// face is weighted by the squared length factor evaluated at the face's
/// mean distance to the axis (areas scale as the factor squared).
pub fn mesh_area_conformal<F>(mesh: &TriMesh, axis: &GeodesicLine, factor: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (p0, w) = axis.hyperboloid_frame();
    let (p0, w) = (p0.vec(), w);
    let mut total = 0.0;
    for (fi, f) in mesh.faces.iter().enumerate() {
        let area = triangle_area_impl(
            &mesh.vertices[f[0]],
            &mesh.vertices[f[1]],
            &mesh.vertices[f[2]],
            fi,
        )?;
        let mean_dist = f
            .iter()
            .map(|&v| dist_to_axis_frame(&mesh.vertices[v].vec(), &p0, &w))
            .sum::<f64>()
            / 3.0;
        total += factor(mean_dist).powi(2) * area;
    }
    Ok(total)
}

// Orthonormal tangent frame at p: canonical basis vectors projected to the
// tangent space and Gram-Schmidt-reduced under the Lorentzian product
// (positive definite there).
fn tangent_frame(p: &HyperboloidPoint) -> [Vec4; 3] {
    let x = p.vec();
    let mut frame: [Vec4; 3] = [Vec4::zero(); 3];
    let mut count = 0;
    for k in 0..4 {
        if count == 3 {
            break;
        }
        let mut e = Vec4::zero();
        match k {
            0 => e.x1 = 1.0,
            1 => e.x2 = 1.0,
            2 => e.x3 = 1.0,
            _ => e.x4 = 1.0,
        }
        // Project out the position: v + <v, x> x is tangent at x.
        let mut v = e + x * e.lorentz_dot(&x);
        for f in frame.iter().take(count) {
            v = v - *f * v.lorentz_dot(f);
        }
        let norm_sq = v.lorentz_dot(&v);
        if norm_sq > 1e-12 {
            frame[count] = v * (1.0 / norm_sq.sqrt());
            count += 1;
        }
    }
    debug_assert_eq!(count, 3, "tangent space of H^3 is 3-dimensional");
    frame
}

/// Outcome of [`minimize_area`]: the relaxed mesh plus diagnostics.
/// `converged` is false when the step budget ran out or the line search
/// stalled before the gradient tolerance was reached.
#[derive(Clone, Debug)]
pub struct MinimizeReport {
    pub mesh: TriMesh,
    pub converged: bool,
    pub steps: usize,
    pub initial_area: f64,
    pub final_area: f64,
    pub grad_norm: f64,
}

struct Star {
    faces: Vec<usize>,
}

fn vertex_stars(mesh: &TriMesh) -> Vec<Star> {
    let mut stars: Vec<Star> = (0..mesh.vertices.len()).map(|_| Star { faces: Vec::new() }).collect();
    for (fi, f) in mesh.faces.iter().enumerate() {
        for &v in f {
            stars[v].faces.push(fi);
        }
    }
    stars
}

fn star_area(mesh: &TriMesh, star: &Star, vertex: usize, at: &HyperboloidPoint) -> f64 {
    let mut total = 0.0;
    for &fi in &star.faces {
        let f = mesh.faces[fi];
        let pick = |ix: usize| if ix == vertex { at } else { &mesh.vertices[ix] };
        total += triangle_area_tolerant(pick(f[0]), pick(f[1]), pick(f[2]));
    }
    total
}

// Finite-difference gradient of the star area in the orthonormal tangent
// frame, as an ambient tangent vector.
fn star_gradient(mesh: &TriMesh, star: &Star, vertex: usize) -> Result<Vec4> {
    let p = mesh.vertices[vertex];
    let frame = tangent_frame(&p);
    let h = tolerances::MESH_FD_STEP;
    let mut grad = Vec4::zero();
    for f in &frame {
        let plus = HyperboloidPoint::project(p.vec() + *f * h)?;
        let minus = HyperboloidPoint::project(p.vec() - *f * h)?;
        let d = (star_area(mesh, star, vertex, &plus) - star_area(mesh, star, vertex, &minus))
            / (2.0 * h);
        grad = grad + *f * d;
    }
    Ok(grad)
}

/// Projected-gradient area minimization with backtracking line search.
///
/// Per step: central-difference gradients per free vertex in an
/// orthonormal tangent frame, a simultaneous step, radial reprojection
/// onto the hyperboloid, and step halving whenever the total area would
/// increase, so the accepted-area sequence is non-increasing. Fixed
/// vertices never move; seam pairs move in lockstep (the secondary vertex
/// is recomputed as the deck image of the primary, and the two pulled-back
/// gradients are averaged).
pub fn minimize_area(
    mesh: TriMesh,
    max_steps: usize,
    step_size: f64,
    tol: f64,
) -> Result<MinimizeReport> {
    let mut mesh = mesh;
    mesh.validate()?;
    if !mesh.fixed.iter().any(|f| !f) {
        return Err(Error::InvalidArgument("mesh has no free vertex".into()));
    }
    // Seam bookkeeping: secondary vertices follow their primaries.
    let mut secondary_of = vec![usize::MAX; mesh.vertices.len()];
    let mut is_secondary = vec![false; mesh.vertices.len()];
    let deck = match &mesh.identification {
        Some(seam) => {
            let deck = seam.deck.ok_or(Error::MissingDeckMap)?;
            for &(i, j) in &seam.pairs {
                secondary_of[i] = j;
                is_secondary[j] = true;
            }
            Some(deck)
        }
        None => None,
    };
    let stars = vertex_stars(&mesh);
    let initial_area = mesh_area(&mesh)?;
    let mut area = initial_area;
    let mut grad_norm = f64::INFINITY;
    let mut steps = 0;
    let mut converged = false;

    for _ in 0..max_steps {
        // Gradients of all primary free vertices.
        let mut grads: Vec<(usize, Vec4)> = Vec::new();
        let mut norm_sq = 0.0;
        for v in 0..mesh.vertices.len() {
            if mesh.fixed[v] || is_secondary[v] {
                continue;
            }
            let mut g = star_gradient(&mesh, &stars[v], v)?;
            if let (Some(deck), true) = (&deck, secondary_of[v] != usize::MAX) {
                let partner = secondary_of[v];
                let g_partner = star_gradient(&mesh, &stars[partner], partner)?;
                g = (g + deck.inverse().apply_vec(&g_partner)) * 0.5;
            }
            norm_sq += g.lorentz_dot(&g);
            grads.push((v, g));
        }
        grad_norm = norm_sq.sqrt();
        if grad_norm < tol {
            converged = true;
            break;
        }

        // Backtracking: halve the step until the area stops increasing.
        let mut step = step_size;
        let mut accepted = false;
        for _ in 0..30 {
            let mut trial = mesh.clone();
            for &(v, g) in &grads {
                let moved = HyperboloidPoint::project(trial.vertices[v].vec() - g * step)?;
                trial.vertices[v] = moved;
                if secondary_of[v] != usize::MAX {
                    let deck = deck.as_ref().expect("deck present for seams");
                    trial.vertices[secondary_of[v]] = deck.apply(&moved);
                }
            }
            let trial_area = mesh_area(&trial)?;
            if trial_area <= area {
                mesh = trial;
                area = trial_area;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        steps += 1;
        if !accepted {
            // Line search stalled: gradient noise floor reached.
            converged = grad_norm < tol;
            break;
        }
    }

    Ok(MinimizeReport { mesh, converged, steps, initial_area, final_area: area, grad_norm })
}

/// Deterministic tangent-space perturbation of all free vertices, seam
/// equivariant: the primary of each pair is perturbed and the secondary is
/// recomputed as its deck image.
pub fn perturb_free_vertices(mesh: &mut TriMesh, magnitude: f64, seed: u64) -> Result<()> {
    let mut secondary_of = vec![usize::MAX; mesh.vertices.len()];
    let mut is_secondary = vec![false; mesh.vertices.len()];
    let deck = match &mesh.identification {
        Some(seam) => {
            for &(i, j) in &seam.pairs {
                secondary_of[i] = j;
                is_secondary[j] = true;
            }
            seam.deck
        }
        None => None,
    };
    let mut rng = SplitMix64::new(seed);
    for v in 0..mesh.vertices.len() {
        if mesh.fixed[v] || is_secondary[v] {
            continue;
        }
        let frame = tangent_frame(&mesh.vertices[v]);
        let mut offset = Vec4::zero();
        for f in &frame {
            offset = offset + *f * (magnitude * (2.0 * rng.next_f64() - 1.0));
        }
        let moved = HyperboloidPoint::project(mesh.vertices[v].vec() + offset)?;
        mesh.vertices[v] = moved;
        if secondary_of[v] != usize::MAX {
            let deck = deck.as_ref().ok_or(Error::MissingDeckMap)?;
            mesh.vertices[secondary_of[v]] = deck.apply(&moved);
        }
    }
    Ok(())
}

// Small deterministic generator for perturbation experiments.
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

// Distance from a point to the axis in the hyperboloid model, from the
// axis frame (p0, w): min over the axis of the point-to-point distance is
// arccosh √(A² - B²) with A = -<x, p0>, B = -<x, w>.
fn dist_to_axis_frame(x: &Vec4, p0: &Vec4, w: &Vec4) -> f64 {
    let a = -x.lorentz_dot(p0);
    let b = -x.lorentz_dot(w);
    (a * a - b * b).max(1.0).sqrt().acosh()
}

/// Compare the coarea formula against direct measurement: returns
/// `(direct, sliced)` where `direct` is the area of the mesh clipped to the
/// `s`-neighborhood of the axis and `sliced` is the trapezoidal integral
/// over `n_slices` levels of the slice length weighted by `1/cos α`, with
/// `cos α = |∇_Σ h|` measured per intersected face.
pub fn coarea_verify(
    mesh: &TriMesh,
    axis: &GeodesicLine,
    s: f64,
    n_slices: usize,
) -> Result<(f64, f64)> {
    if !crate::positive_finite(s) || n_slices < 2 {
        return Err(Error::InvalidArgument(format!(
            "need s > 0 and at least 2 slices; got ({s}, {n_slices})"
        )));
    }
    let (p0, w) = axis.hyperboloid_frame();
    let (p0, w) = (p0.vec(), w);
    let dist: Vec<f64> = mesh
        .vertices
        .iter()
        .map(|v| dist_to_axis_frame(&v.vec(), &p0, &w))
        .collect();

    // Direct: clip faces along the level set, linearly in barycentric
    // coordinates, and measure the inside polygon.
    let mut direct = 0.0;
    for f in &mesh.faces {
        let ps = [&mesh.vertices[f[0]], &mesh.vertices[f[1]], &mesh.vertices[f[2]]];
        let ds = [dist[f[0]], dist[f[1]], dist[f[2]]];
        let inside = [ds[0] <= s, ds[1] <= s, ds[2] <= s];
        match inside.iter().filter(|&&b| b).count() {
            3 => direct += triangle_area_tolerant(ps[0], ps[1], ps[2]),
            0 => {}
            _ => {
                let mut poly: Vec<HyperboloidPoint> = Vec::with_capacity(4);
                for e in 0..3 {
                    let (pa, pb) = (ps[e], ps[(e + 1) % 3]);
                    let (da, db) = (ds[e], ds[(e + 1) % 3]);
                    if da <= s {
                        poly.push(*pa);
                    }
                    if (da <= s) != (db <= s) {
                        let t = (s - da) / (db - da);
                        let v = pa.vec() + (pb.vec() - pa.vec()) * t;
                        poly.push(HyperboloidPoint::project(v)?);
                    }
                }
                for q in 1..poly.len().saturating_sub(1) {
                    direct += triangle_area_tolerant(&poly[0], &poly[q], &poly[q + 1]);
                }
            }
        }
    }

    // Sliced: level-set length weighted by 1/cos α per crossed face.
    let mut level_sums = Vec::with_capacity(n_slices + 1);
    for k in 0..=n_slices {
        let mut t = s * k as f64 / n_slices as f64;
        // Nudge levels off vertex values: crossings are detected by strict
        // sign change, and a level through a whole grid row of vertices
        // would silently drop its segments.
        for _ in 0..4 {
            let collides = dist.iter().any(|&d| (d - t).abs() <= 1e-12 * (1.0 + t));
            if !collides {
                break;
            }
            t += 1e-9 * (1.0 + t);
        }
        let mut sum = 0.0;
        for f in &mesh.faces {
            let ps = [&mesh.vertices[f[0]], &mesh.vertices[f[1]], &mesh.vertices[f[2]]];
            let ds = [dist[f[0]], dist[f[1]], dist[f[2]]];
            let mut crossings: Vec<HyperboloidPoint> = Vec::with_capacity(2);
            for e in 0..3 {
                let (da, db) = (ds[e], ds[(e + 1) % 3]);
                if (da - t) * (db - t) < 0.0 {
                    let lam = (t - da) / (db - da);
                    let v = ps[e].vec() + (ps[(e + 1) % 3].vec() - ps[e].vec()) * lam;
                    crossings.push(HyperboloidPoint::project(v)?);
                }
            }
            if crossings.len() != 2 {
                continue;
            }
            let seg = distance_hyperboloid(&crossings[0], &crossings[1]);
            let cos_alpha = face_cos_alpha(ps, &ds)?;
            if cos_alpha < tolerances::COAREA_COS_FLOOR {
                return Err(Error::SliceTangency { slice: k, cos_alpha });
            }
            sum += seg / cos_alpha;
        }
        level_sums.push(sum);
    }
    let h = s / n_slices as f64;
    let sliced = h
        * (0.5 * level_sums[0]
            + 0.5 * level_sums[n_slices]
            + level_sums[1..n_slices].iter().sum::<f64>());

    Ok((direct, sliced))
}

// |∇_Σ h| for the affine interpolation of the vertex distances over the
// face, measured in the induced metric; clamped to 1 (it is a projection
// of a unit ambient gradient).
fn face_cos_alpha(ps: [&HyperboloidPoint; 3], ds: &[f64; 3]) -> Result<f64> {
    let e1 = ps[1].vec() - ps[0].vec();
    let e2 = ps[2].vec() - ps[0].vec();
    let g11 = e1.lorentz_dot(&e1);
    let g12 = e1.lorentz_dot(&e2);
    let g22 = e2.lorentz_dot(&e2);
    let det = g11 * g22 - g12 * g12;
    if det <= 0.0 {
        return Err(Error::InternalConsistency("degenerate face metric in coarea slice".into()));
    }
    let (dh1, dh2) = (ds[1] - ds[0], ds[2] - ds[0]);
    let grad_sq = (g22 * dh1 * dh1 - 2.0 * g12 * dh1 * dh2 + g11 * dh2 * dh2) / det;
    Ok(grad_sq.max(0.0).sqrt().min(1.0))
}
