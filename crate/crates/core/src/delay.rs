/// Fixed-capacity sample history for one signal stream.
///
/// Lag 0 is the most recent sample. Every lag that has not been written yet,
/// including lags at or beyond the capacity, reads as exactly `0.0`, so the
/// stream behaves as if it were preceded by silence.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayLine {
    buf: Vec<f64>,
    head: usize,
    fill: usize,
}

impl DelayLine {
    /// Creates an empty line retaining `capacity` samples.
    ///
    /// Panics if `capacity` is zero.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "delay line capacity must be positive");
        Self {
            buf: vec![0.0; capacity],
            head: capacity - 1,
            fill: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    /// Number of samples pushed so far, saturating at the capacity.
    pub fn len(&self) -> usize {
        self.fill
    }

    pub fn is_empty(&self) -> bool {
        self.fill == 0
    }

    pub fn push(&mut self, sample: f64) {
        self.head += 1;
        if self.head == self.buf.len() {
            self.head = 0;
        }
        self.buf[self.head] = sample;
        if self.fill < self.buf.len() {
            self.fill += 1;
        }
    }

    #[inline]
    pub fn get(&self, lag: usize) -> f64 {
        if lag >= self.fill {
            return 0.0;
        }
        let cap = self.buf.len();
        self.buf[(self.head + cap - lag) % cap]
    }

    /// `len` consecutive samples starting at `start_lag`, newest first.
    pub fn window(&self, start_lag: usize, len: usize) -> impl Iterator<Item = f64> + '_ {
        (start_lag..start_lag + len).map(move |lag| self.get(lag))
    }

    /// Inner product of `coeffs` with the most recent `coeffs.len()` samples,
    /// i.e. `sum_k coeffs[k] * x(n - k)`.
    pub fn dot(&self, coeffs: &[f64]) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * self.get(k))
            .sum()
    }

    pub fn clear(&mut self) {
        self.buf.iter_mut().for_each(|s| *s = 0.0);
        self.head = self.buf.len() - 1;
        self.fill = 0;
    }
}
