//! Planar homography between the image and the wall plane.
//!
//! Estimation is the normalized direct linear transform: both point sets are
//! translated to their centroid and scaled to a mean distance of √2, the
//! 2n×9 system is solved for its right null vector by SVD, and the result is
//! denormalized and scaled so the bottom-right entry equals one.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Point2};
use crate::scalar::Real;

/// `|w|` below this is treated as a point at infinity.
const W_EPSILON: f64 = 1e-12;

/// 3×3 projective map, row-major. Maps image pixels to wall-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Homography<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Homography<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self { m: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> Matrix3<T> {
        Matrix3::from_fn(|r, c| self.m[r][c])
    }

    /// Builds from a matrix, rescaling so that `m[2][2] == 1` when that entry is not ~0.
    pub fn from_matrix(mat: &Matrix3<T>) -> Self {
        let norm = mat.iter().fold(T::zero(), |acc, &v| acc + v * v);
        let norm = Float::sqrt(norm);
        let corner = mat[(2, 2)];
        let scale = if Float::abs(corner) > T::epsilon() * norm { corner } else { norm };
        Self { m: std::array::from_fn(|r| std::array::from_fn(|c| mat[(r, c)] / scale)) }
    }

    pub fn estimate(src: &[Point2<T>], dst: &[Point2<T>]) -> Result<Self, GeometryError> {
        estimate_homography(src, dst)
    }

    pub fn project(&self, p: Point2<T>) -> Result<Point2<T>, GeometryError> {
        let m = &self.m;
        let w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
        if Float::abs(w) < T::lit(W_EPSILON) || !Float::is_finite(w) {
            return Err(GeometryError::PointAtInfinity(w.as_f64()));
        }
        let x = m[0][0] * p.x + m[0][1] * p.y + m[0][2];
        let y = m[1][0] * p.x + m[1][1] * p.y + m[1][2];
        Ok(Point2::new(x / w, y / w))
    }

    pub fn inverse(&self) -> Result<Self, GeometryError> {
        self.matrix()
            .try_inverse()
            .map(|inv| Self::from_matrix(&inv))
            .ok_or(GeometryError::Singular)
    }

    /// Mean Euclidean distance between `self(src[i])` and `dst[i]`.
    pub fn reprojection_error(&self, src: &[Point2<T>], dst: &[Point2<T>]) -> Result<T, GeometryError> {
        reprojection_error(self, src, dst)
    }

    pub fn wall_distance(&self, a: Point2<T>, b: Point2<T>) -> Result<T, GeometryError> {
        wall_distance(self, a, b)
    }
}

pub fn project<T: Real>(h: &Homography<T>, p: Point2<T>) -> Result<Point2<T>, GeometryError> {
    h.project(p)
}

pub fn wall_distance<T: Real>(h: &Homography<T>, a: Point2<T>, b: Point2<T>) -> Result<T, GeometryError> {
    Ok(h.project(a)?.distance(&h.project(b)?))
}

pub fn reprojection_error<T: Real>(
    h: &Homography<T>,
    src: &[Point2<T>],
    dst: &[Point2<T>],
) -> Result<T, GeometryError> {
    if src.len() != dst.len() {
        return Err(GeometryError::LengthMismatch { src: src.len(), dst: dst.len() });
    }
    if src.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let mut total = T::zero();
    for (s, d) in src.iter().zip(dst) {
        total += h.project(*s)?.distance(d);
    }
    Ok(total / T::lit(src.len() as f64))
}

/// Similarity transform taking `pts` to zero centroid and mean distance √2.
fn normalizing_transform<T: Real>(pts: &[Point2<T>]) -> Result<Matrix3<T>, GeometryError> {
    let n = T::lit(pts.len() as f64);
    let (sx, sy) = pts.iter().fold((T::zero(), T::zero()), |(ax, ay), p| (ax + p.x, ay + p.y));
    let centroid = Point2::new(sx / n, sy / n);
    let mean_dist = pts.iter().fold(T::zero(), |acc, p| acc + p.distance(&centroid)) / n;
    if !(mean_dist > T::zero()) || !Float::is_finite(mean_dist) {
        return Err(GeometryError::DegenerateConfiguration("all points coincide".into()));
    }
    let s = Float::sqrt(T::lit(2.0)) / mean_dist;
    let (z, o) = (T::zero(), T::one());
    Ok(Matrix3::new(s, z, -s * centroid.x, z, s, -s * centroid.y, z, z, o))
}

fn apply<T: Real>(t: &Matrix3<T>, p: &Point2<T>) -> Point2<T> {
    let v = t * Vector3::new(p.x, p.y, T::one());
    Point2::new(v[0] / v[2], v[1] / v[2])
}

/// True if the three points are collinear up to a relative angular tolerance.
fn collinear<T: Real>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>, tol: T) -> bool {
    let (ab, ac) = (*b - *a, *c - *a);
    let cross = ab.x * ac.y - ab.y * ac.x;
    let scale = Float::hypot(ab.x, ab.y) * Float::hypot(ac.x, ac.y);
    Float::abs(cross) <= tol * scale
}

fn check_configuration<T: Real>(pts: &[Point2<T>], which: &str, tol: T) -> Result<(), GeometryError> {
    for (i, a) in pts.iter().enumerate() {
        if !a.is_finite() {
            return Err(GeometryError::DegenerateConfiguration(format!("{which} point {i} is not finite")));
        }
        for (j, b) in pts.iter().enumerate().skip(i + 1) {
            if a.distance(b) <= tol {
                return Err(GeometryError::DegenerateConfiguration(format!(
                    "{which} points {i} and {j} coincide"
                )));
            }
        }
    }
    if pts.len() == 4 {
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if collinear(&pts[i], &pts[j], &pts[k], tol) {
                return Err(GeometryError::DegenerateConfiguration(format!(
                    "{which} points {i}, {j}, {k} are collinear"
                )));
            }
        }
    }
    Ok(())
}

/// Normalized DLT estimate of the homography taking `src` onto `dst`.
pub fn estimate_homography<T: Real>(src: &[Point2<T>], dst: &[Point2<T>]) -> Result<Homography<T>, GeometryError> {
    if src.len() != dst.len() {
        return Err(GeometryError::LengthMismatch { src: src.len(), dst: dst.len() });
    }
    if src.len() < 4 {
        return Err(GeometryError::InsufficientPoints(src.len()));
    }
    let tol = Float::sqrt(T::epsilon());

    let t_src = normalizing_transform(src)?;
    let t_dst = normalizing_transform(dst)?;
    let ns: Vec<_> = src.iter().map(|p| apply(&t_src, p)).collect();
    let nd: Vec<_> = dst.iter().map(|p| apply(&t_dst, p)).collect();
    check_configuration(&ns, "source", tol)?;
    check_configuration(&nd, "destination", tol)?;

    // A thin 8×9 system would drop the null vector from a reduced SVD, so pad to 9 rows.
    let rows = (2 * src.len()).max(9);
    let (z, o) = (T::zero(), T::one());
    let mut a = DMatrix::<T>::zeros(rows, 9);
    for (i, (p, q)) in ns.iter().zip(&nd).enumerate() {
        let (x, y, u, v) = (p.x, p.y, q.x, q.y);
        let r0 = [x, y, o, z, z, z, -u * x, -u * y, -u];
        let r1 = [z, z, z, x, y, o, -v * x, -v * y, -v];
        for c in 0..9 {
            a[(2 * i, c)] = r0[c];
            a[(2 * i + 1, c)] = r1[c];
        }
    }

    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| GeometryError::DegenerateConfiguration("SVD did not converge".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let smax = svd.singular_values[order[order.len() - 1]];
    let second = svd.singular_values[order[1]];
    if second <= tol * smax {
        return Err(GeometryError::DegenerateConfiguration(
            "correspondences do not determine a unique homography".into(),
        ));
    }
    let h = v_t.row(order[0]);
    let hn = Matrix3::from_fn(|r, c| h[3 * r + c]);
    if Float::abs(hn.determinant()) <= tol {
        return Err(GeometryError::DegenerateConfiguration("estimated map is singular".into()));
    }

    let t_dst_inv = t_dst.try_inverse().ok_or(GeometryError::Singular)?;
    let full = t_dst_inv * hn * t_src;
    Ok(Homography::from_matrix(&full))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point2<f64>> {
        vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)]
    }

    fn max_abs_diff(a: &Homography<f64>, b: &Homography<f64>) -> f64 {
        (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .map(|(r, c)| (a.m[r][c] - b.m[r][c]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_from_unit_square() {
        let sq = unit_square();
        let h = estimate_homography(&sq, &sq).unwrap();
        assert!(max_abs_diff(&h, &Homography::identity()) < 1e-12);
    }

    #[test]
    fn pure_scale() {
        let sq = unit_square();
        let scaled: Vec<_> = sq.iter().map(|p| Point2::new(2. * p.x, 2. * p.y)).collect();
        let h = estimate_homography(&sq, &scaled).unwrap();
        let expect = Homography::from_rows([[2., 0., 0.], [0., 2., 0.], [0., 0., 1.]]);
        assert!(max_abs_diff(&h, &expect) < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let sq = unit_square();
        assert_eq!(
            estimate_homography(&sq[..3], &sq[..3]),
            Err(GeometryError::InsufficientPoints(3))
        );
        assert!(matches!(
            estimate_homography(&sq, &sq[..3]),
            Err(GeometryError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn collinear_and_duplicate_rejected() {
        let line = vec![Point2::new(0., 0.), Point2::new(1., 1.), Point2::new(2., 2.), Point2::new(0., 1.)];
        assert!(matches!(
            estimate_homography(&line, &unit_square()),
            Err(GeometryError::DegenerateConfiguration(_))
        ));
        let dup = vec![Point2::new(0., 0.), Point2::new(0., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        assert!(matches!(
            estimate_homography(&unit_square(), &dup),
            Err(GeometryError::DegenerateConfiguration(_))
        ));
        let all_on_line: Vec<_> = (0..10).map(|i| Point2::new(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(
            estimate_homography(&all_on_line, &all_on_line),
            Err(GeometryError::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn projection_examples() {
        let id = Homography::<f64>::identity();
        assert_eq!(id.project(Point2::new(7., 9.)).unwrap(), Point2::new(7., 9.));
        let s = Homography::from_rows([[2., 0., 0.], [0., 2., 0.], [0., 0., 1.]]);
        assert_eq!(s.project(Point2::new(3., 4.)).unwrap(), Point2::new(6., 8.));
        let at_inf = Homography::from_rows([[1., 0., 0.], [0., 1., 0.], [1., 0., 0.]]);
        assert!(matches!(at_inf.project(Point2::new(0., 5.)), Err(GeometryError::PointAtInfinity(_))));
    }

    #[test]
    fn reprojection_examples() {
        let id = Homography::<f64>::identity();
        let src = unit_square();
        assert_eq!(reprojection_error(&id, &src, &src).unwrap(), 0.0);
        let shifted: Vec<_> = src.iter().map(|p| Point2::new(p.x + 3., p.y + 4.)).collect();
        assert!((reprojection_error(&id, &src, &shifted).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(reprojection_error(&id, &[], &[]), Err(GeometryError::EmptyInput));
    }

    #[test]
    fn wall_distance_examples() {
        let id = Homography::<f64>::identity();
        let a = Point2::new(0., 0.);
        assert_eq!(wall_distance(&id, a, a).unwrap(), 0.0);
        assert_eq!(wall_distance(&id, a, Point2::new(3., 4.)).unwrap(), 5.0);
    }

    #[test]
    fn singular_inverse() {
        let h = Homography::from_rows([[1., 0., 0.], [1., 0., 0.], [0., 0., 1.]]);
        assert_eq!(h.inverse(), Err(GeometryError::Singular));
    }
}
