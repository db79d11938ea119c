use super::activation::Activation;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::rng::SeededRng;

/// Fully-connected network. Hidden layers apply `activation`, the output
/// layer is linear. `weights[l]` maps layer `l` to layer `l + 1` and has
/// shape `layer_dims[l + 1] × layer_dims[l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layer_dims: Vec<usize>,
    weights: Vec<DenseMatrix>,
    biases: Vec<DenseVector>,
    activation: Activation,
}

/// Pre-activations and layer inputs of one batch, rows are samples.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    inputs: Vec<DenseMatrix>,
    pre: Vec<DenseMatrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &DenseMatrix {
        self.pre.last().expect("at least one layer")
    }

    /// Pre-activations per layer, the last one being the output.
    pub fn pre_activations(&self) -> &[DenseMatrix] {
        &self.pre
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub loss: f64,
    pub weights: Vec<DenseMatrix>,
    pub biases: Vec<DenseVector>,
}

impl Gradients {
    /// Same layout as [`Mlp::params`].
    pub fn flatten(&self) -> DenseVector {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b.as_slice());
        }
        out.into()
    }
}

impl Mlp {
    /// He initialisation: weights `N(0, 2/fan_in)`, zero biases.
    pub fn new(layer_dims: &[usize], activation: Activation, rng: &mut SeededRng) -> Result<Self> {
        if layer_dims.len() < 2 || layer_dims.contains(&0) {
            return Err(Error::InvalidArgument(format!("bad layer dims {layer_dims:?}")));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in layer_dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let scale = (2.0 / fan_in as f64).sqrt();
            let data = (0..fan_in * fan_out).map(|_| scale * rng.standard_normal()).collect();
            weights.push(DenseMatrix::new(fan_out, fan_in, data)?);
            biases.push(DenseVector::zeros(fan_out));
        }
        Ok(Self { layer_dims: layer_dims.to_vec(), weights, biases, activation })
    }

    /// `depth` hidden layers of `width` units between `input` and `output`.
    pub fn with_depth(
        input: usize,
        width: usize,
        depth: usize,
        output: usize,
        activation: Activation,
        rng: &mut SeededRng,
    ) -> Result<Self> {
        let mut dims = vec![input];
        dims.extend(std::iter::repeat_n(width, depth));
        dims.push(output);
        Self::new(&dims, activation, rng)
    }

    pub fn from_parts(
        layer_dims: Vec<usize>,
        weights: Vec<DenseMatrix>,
        biases: Vec<DenseVector>,
        activation: Activation,
    ) -> Result<Self> {
        if layer_dims.len() < 2 || weights.len() != layer_dims.len() - 1 || biases.len() != weights.len() {
            return Err(Error::InvalidArgument("layer counts disagree".into()));
        }
        for (l, (w, b)) in weights.iter().zip(&biases).enumerate() {
            if w.cols() != layer_dims[l] || w.rows() != layer_dims[l + 1] || b.dim() != layer_dims[l + 1] {
                return Err(Error::InvalidArgument(format!("layer {l} has incompatible shape")));
            }
            if !b.is_finite() {
                return Err(Error::InvalidArgument(format!("layer {l} bias is not finite")));
            }
        }
        Ok(Self { layer_dims, weights, biases, activation })
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn weights(&self) -> &[DenseMatrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[DenseVector] {
        &self.biases
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn depth(&self) -> usize {
        self.layer_dims.len() - 2
    }

    pub fn num_params(&self) -> usize {
        self.layer_dims.windows(2).map(|p| p[1] * (p[0] + 1)).sum()
    }

    /// Flattened parameters, layer by layer: weights row-major, then bias.
    pub fn params(&self) -> DenseVector {
        let mut out = Vec::with_capacity(self.num_params());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.as_slice());
            out.extend_from_slice(b.as_slice());
        }
        out.into()
    }

    /// Same architecture with parameters taken from `theta`. Values are not
    /// checked for finiteness so diverging runs can still be evaluated.
    pub fn with_params(&self, theta: &DenseVector) -> Result<Self> {
        crate::error::check_dim(self.num_params(), theta.dim())?;
        let mut net = self.clone();
        let mut rest = theta.as_slice();
        for l in 0..net.weights.len() {
            let (rows, cols) = (net.weights[l].rows(), net.weights[l].cols());
            let (w, tail) = rest.split_at(rows * cols);
            let (b, tail) = tail.split_at(rows);
            net.weights[l] = DenseMatrix::from_raw(rows, cols, w.to_vec());
            net.biases[l] = DenseVector::from(b);
            rest = tail;
        }
        Ok(net)
    }

    pub fn forward(&self, x: &DenseMatrix) -> Result<ForwardCache> {
        if x.cols() != self.layer_dims[0] {
            return Err(Error::InvalidArgument(format!(
                "input has {} features, network expects {}",
                x.cols(),
                self.layer_dims[0]
            )));
        }
        let last = self.weights.len() - 1;
        let mut inputs = Vec::with_capacity(self.weights.len());
        let mut pre = Vec::with_capacity(self.weights.len());
        let mut a = x.clone();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let z = affine(&a, w, b);
            inputs.push(a);
            a = if l < last { map(&z, |v| self.activation.value(v)) } else { z.clone() };
            pre.push(z);
        }
        Ok(ForwardCache { inputs, pre })
    }

    pub fn predict(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(self.forward(x)?.output().clone())
    }

    /// Mean squared error over all target entries.
    pub fn loss(&self, x: &DenseMatrix, targets: &DenseMatrix) -> Result<f64> {
        let cache = self.forward(x)?;
        mse(cache.output(), targets)
    }

    /// Gradients of the mean squared error for a cached forward pass.
    pub fn backward(&self, cache: &ForwardCache, targets: &DenseMatrix) -> Result<Gradients> {
        let out = cache.output();
        let loss = mse(out, targets)?;
        let n = out.rows();
        let scale = 2.0 / (n * out.cols()) as f64;
        let mut delta: Vec<f64> = out
            .as_slice()
            .iter()
            .zip(targets.as_slice())
            .map(|(o, t)| scale * (o - t))
            .collect();
        let layers = self.weights.len();
        let mut gw = vec![DenseMatrix::zeros(0, 0); layers];
        let mut gb = vec![DenseVector::zeros(0); layers];
        for l in (0..layers).rev() {
            let w = &self.weights[l];
            let (fan_out, fan_in) = (w.rows(), w.cols());
            let a = cache.inputs[l].as_slice();
            let mut dw = vec![0.0; fan_out * fan_in];
            let mut db = vec![0.0; fan_out];
            for s in 0..n {
                let d = &delta[s * fan_out..(s + 1) * fan_out];
                let row = &a[s * fan_in..(s + 1) * fan_in];
                for (j, &dj) in d.iter().enumerate() {
                    db[j] += dj;
                    if dj != 0.0 {
                        for (g, &ai) in dw[j * fan_in..(j + 1) * fan_in].iter_mut().zip(row) {
                            *g += dj * ai;
                        }
                    }
                }
            }
            if l > 0 {
                let z = cache.pre[l - 1].as_slice();
                let wd = w.as_slice();
                let mut next = vec![0.0; n * fan_in];
                for s in 0..n {
                    let d = &delta[s * fan_out..(s + 1) * fan_out];
                    let dst = &mut next[s * fan_in..(s + 1) * fan_in];
                    for (j, &dj) in d.iter().enumerate() {
                        if dj != 0.0 {
                            for (x, &wji) in dst.iter_mut().zip(&wd[j * fan_in..(j + 1) * fan_in]) {
                                *x += dj * wji;
                            }
                        }
                    }
                    for (x, &zi) in dst.iter_mut().zip(&z[s * fan_in..(s + 1) * fan_in]) {
                        *x *= self.activation.deriv(zi);
                    }
                }
                delta = next;
            }
            gw[l] = DenseMatrix::from_raw(fan_out, fan_in, dw);
            gb[l] = db.into();
        }
        Ok(Gradients { loss, weights: gw, biases: gb })
    }
}

fn mse(out: &DenseMatrix, targets: &DenseMatrix) -> Result<f64> {
    if out.rows() != targets.rows() || out.cols() != targets.cols() {
        return Err(Error::InvalidArgument(format!(
            "targets are {}x{}, outputs are {}x{}",
            targets.rows(),
            targets.cols(),
            out.rows(),
            out.cols()
        )));
    }
    let sq: f64 = out.as_slice().iter().zip(targets.as_slice()).map(|(o, t)| (o - t) * (o - t)).sum();
    Ok(sq / out.as_slice().len() as f64)
}

/// `a Wᵀ + 1 bᵀ`.
fn affine(a: &DenseMatrix, w: &DenseMatrix, b: &DenseVector) -> DenseMatrix {
    let (n, fan_in, fan_out) = (a.rows(), w.cols(), w.rows());
    let mut out = Vec::with_capacity(n * fan_out);
    for s in 0..n {
        let row = a.row(s);
        for j in 0..fan_out {
            let wj = &w.as_slice()[j * fan_in..(j + 1) * fan_in];
            out.push(b[j] + row.iter().zip(wj).map(|(x, y)| x * y).sum::<f64>());
        }
    }
    DenseMatrix::from_raw(n, fan_out, out)
}

fn map(m: &DenseMatrix, f: impl Fn(f64) -> f64) -> DenseMatrix {
    DenseMatrix::from_raw(m.rows(), m.cols(), m.as_slice().iter().map(|&v| f(v)).collect())
}
