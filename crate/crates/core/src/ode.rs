//! Adaptive Dormand-Prince 5(4) integrator for small autonomous systems.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub(crate) type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

/// Integrates `y' = f(y)` from `t = 0` until `t_end` or until `observe`
/// returns [`Control::Stop`]. `observe` sees every accepted step.
/// Returns the final time reached.
pub(crate) fn integrate<F, O>(
    f: F,
    mut y: State,
    t_end: f64,
    tol: Tolerance,
    mut observe: O,
) -> f64
where
    F: Fn(&State) -> State,
    O: FnMut(f64, &State) -> Control,
{
    let mut t = 0.0;
    let mut h = 1e-3_f64.min(t_end);
    let h_min = 1e-14 * t_end.max(1.0);
    let mut k = [[0.0; 2]; 7];
    k[0] = f(&y);
    if observe(t, &y) == Control::Stop {
        return t;
    }
    while t < t_end {
        h = h.min(t_end - t);
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            debug_assert!(C[s] > 0.0);
            k[s] = f(&ys);
        }
        let mut y5 = y;
        let mut err = 0.0_f64;
        for i in 0..2 {
            let mut inc5 = 0.0;
            let mut inc4 = 0.0;
            for s in 0..7 {
                inc5 += B5[s] * k[s][i];
                inc4 += B4[s] * k[s][i];
            }
            y5[i] += h * inc5;
            let scale = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (inc5 - inc4)).abs() / scale);
        }
        if err <= 1.0 || h <= h_min {
            t += h;
            y = y5;
            // first-same-as-last: the last stage is f at the new point
            k[0] = k[6];
            if observe(t, &y) == Control::Stop {
                return t;
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).max(h_min);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let tol = Tolerance {
            rtol: 1e-12,
            atol: 1e-12,
        };
        let mut last = [0.0; 2];
        let t_end = 2.0 * std::f64::consts::PI;
        let t = integrate(
            |y| [y[1], -y[0]],
            [1.0, 0.0],
            t_end,
            tol,
            |_, y| {
                last = *y;
                Control::Continue
            },
        );
        assert!((t - t_end).abs() < 1e-12);
        assert!((last[0] - 1.0).abs() < 1e-9 && last[1].abs() < 1e-9);
    }

    #[test]
    fn exponential_growth() {
        let tol = Tolerance {
            rtol: 1e-11,
            atol: 1e-14,
        };
        let mut last = [0.0; 2];
        integrate(
            |y| [y[0], -2.0 * y[1]],
            [1.0, 1.0],
            3.0,
            tol,
            |_, y| {
                last = *y;
                Control::Continue
            },
        );
        assert!((last[0] / 3f64.exp() - 1.0).abs() < 1e-9);
        assert!((last[1] / (-6f64).exp() - 1.0).abs() < 1e-8);
    }
}
