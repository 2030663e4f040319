"""Texto de ``--help-formats``: columnas y estructura de cada fichero de salida."""

HELP_FORMATS = """\
dynloss output formats
======================

train.csv / val.csv (spiral-gen, train)
  header: x0,x1,label,C=<num_classes>
  one row per point; coordinates with 17 significant digits; label in [0, C)

trace.csv (train)
  step        gradient step t (0-based)
  loss        dynamical loss F(t) at the parameters of step t
  delta_loss  F(t) - F(t-1); empty at t = 0
  train_acc   training accuracy at step t
  val_acc     validation accuracy; only every train.val_stride steps
  gamma_i     class weight of class i at step t (sums to C)
  hessian_eig_1..k  top-k Hessian eigenvalues (Lanczos); every spectra.stride steps
  ntk_top_eig largest NTK eigenvalue; every spectra.stride steps
  empty cells mean "not recorded at this step"

summary.json (train)
  final_train_accuracy, final_val_accuracy, final_loss, steps_run,
  diverged, divergence_step, instability_intervals [[start, end], ...] (steps),
  threshold_estimate, alternation_fractions, hessian_crossings, learning_rate,
  spectra_stride

final.ckpt (train)
  numpy .npz with header = [width, in_dim, C, seed] (uint64) and flat (float64)
  in the order W1 (row-major), b1, W2 (row-major), b2

phase.csv (sweep)
  T,A,seed,train_acc,val_acc   one row per run; divergent runs have accuracy 0
phase.json (sweep)
  per-cell mean, sd, sem and [0, 1]-clipped mean +/- sd bands, divergent and
  failed counts, sweep metrics

threshold.csv (threshold-scan)
  eta,width,T,steps,threshold,n_intervals,diverged   threshold empty when no
  instability was detected
threshold.json (threshold-scan)
  pooled and per-width log-log fits: exponent, intercept, r_squared, n_points

spectra.json (spectra)
  hessian_top_eigs (descending), ntk_top_eig, lanczos iterations, residual
  norms, breakdown flag, stability regime of ntk_top_eig

hessian.bin / ntk.bin (spectra --dump-matrices)
  8 bytes b"DLMATRX\\0", uint64 rows, uint64 cols (little-endian), then
  rows*cols float64 little-endian values in row-major order

manifest.json (every command)
  version, command, config (dotted keys), seeds {run, data, init}, artifacts
  replay with: dynloss <command> --manifest manifest.json --output-dir DIR

exit codes
  0 success, 1 usage or configuration error, 2 divergence or runtime abort,
  3 I/O error
"""
