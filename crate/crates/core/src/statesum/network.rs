use crate::gcore::{Matrix, Scalar};

/// A dense tensor whose legs are face slots `(face, side)`.
#[derive(Clone, Debug)]
pub(crate) struct Tensor {
    pub legs: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub data: Vec<Scalar>,
}

impl Tensor {
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }
}

fn multi_indices(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    (0..total).map(move |mut k| {
        let mut idx = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            idx[i] = k % dims[i];
            k /= dims[i];
        }
        idx
    })
}

/// Contract `face` with copairing `omega[x][y]` (x on side 0, y on side 1).
pub(crate) fn contract_face(tensors: &mut Vec<Tensor>, face: usize, omega: &Matrix) {
    let find = |side: usize| {
        tensors
            .iter()
            .enumerate()
            .find_map(|(ti, t)| t.legs.iter().position(|&l| l == (face, side)).map(|p| (ti, p)))
            .expect("face slot present")
    };
    let (ta, pa) = find(0);
    let (tb, pb) = find(1);
    let field = omega.get(0, 0).field();
    if ta == tb {
        let t = &tensors[ta];
        let strides = t.strides();
        let keep: Vec<usize> = (0..t.legs.len()).filter(|&i| i != pa && i != pb).collect();
        let dims: Vec<usize> = keep.iter().map(|&i| t.dims[i]).collect();
        let mut data = Vec::with_capacity(dims.iter().product());
        for idx in multi_indices(&dims) {
            let base: usize = keep.iter().zip(&idx).map(|(&i, &v)| strides[i] * v).sum();
            let mut acc = field.zero();
            for x in 0..t.dims[pa] {
                for y in 0..t.dims[pb] {
                    let w = omega.get(x, y);
                    if !w.is_zero() {
                        acc += &(&t.data[base + x * strides[pa] + y * strides[pb]] * w);
                    }
                }
            }
            data.push(acc);
        }
        let legs = keep.iter().map(|&i| t.legs[i]).collect();
        tensors[ta] = Tensor { legs, dims, data };
        return;
    }
    let (first, second) = if ta < tb { (ta, tb) } else { (tb, ta) };
    let b = tensors.remove(second);
    let a = tensors.remove(first);
    let (a, pa, b, pb, flip) = if ta < tb { (a, pa, b, pb, false) } else { (a, pb, b, pa, true) };
    let (sa, sb) = (a.strides(), b.strides());
    let keep_a: Vec<usize> = (0..a.legs.len()).filter(|&i| i != pa).collect();
    let keep_b: Vec<usize> = (0..b.legs.len()).filter(|&i| i != pb).collect();
    let mut dims: Vec<usize> = keep_a.iter().map(|&i| a.dims[i]).collect();
    dims.extend(keep_b.iter().map(|&i| b.dims[i]));
    let mut data = Vec::with_capacity(dims.iter().product());
    for idx in multi_indices(&dims) {
        let base_a: usize = keep_a.iter().zip(&idx).map(|(&i, &v)| sa[i] * v).sum();
        let base_b: usize = keep_b.iter().zip(&idx[keep_a.len()..]).map(|(&i, &v)| sb[i] * v).sum();
        let mut acc = field.zero();
        for x in 0..a.dims[pa] {
            let va = &a.data[base_a + x * sa[pa]];
            if va.is_zero() {
                continue;
            }
            for y in 0..b.dims[pb] {
                let w = if flip { omega.get(y, x) } else { omega.get(x, y) };
                if !w.is_zero() {
                    acc += &(&(va * w) * &b.data[base_b + y * sb[pb]]);
                }
            }
        }
        data.push(acc);
    }
    let mut legs: Vec<(usize, usize)> = keep_a.iter().map(|&i| a.legs[i]).collect();
    legs.extend(keep_b.iter().map(|&i| b.legs[i]));
    tensors.push(Tensor { legs, dims, data });
}

/// Size of the tensor produced by contracting `face` next.
pub(crate) fn contraction_size(tensors: &[Tensor], face: usize) -> usize {
    let find = |side: usize| {
        tensors
            .iter()
            .enumerate()
            .find_map(|(ti, t)| t.legs.iter().position(|&l| l == (face, side)).map(|p| (ti, p)))
            .expect("face slot present")
    };
    let (ta, pa) = find(0);
    let (tb, pb) = find(1);
    if ta == tb {
        tensors[ta].size() / (tensors[ta].dims[pa] * tensors[ta].dims[pb]).max(1)
    } else {
        (tensors[ta].size() / tensors[ta].dims[pa].max(1)) * (tensors[tb].size() / tensors[tb].dims[pb].max(1))
    }
}
