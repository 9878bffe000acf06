"""Feed-forward binary classifier trained by mini-batch gradient descent."""
import numpy as np


def _act(name, z):
    return np.maximum(z, 0.0) if name == "relu" else np.tanh(z)


def _act_grad(name, z, a):
    return (z > 0).astype(float) if name == "relu" else 1.0 - a * a


def sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def init_weights(sizes, rng):
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        lim = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append((rng.uniform(-lim, lim, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return layers


def forward(layers, X, activation):
    """Return the output logits and the cached (pre, post) activations."""
    cache = []
    a = X
    for W, b in layers[:-1]:
        z = a @ W + b
        a_next = _act(activation, z)
        cache.append((a, z, a_next))
        a = a_next
    W, b = layers[-1]
    return (a @ W + b)[:, 0], cache, a


def loss_and_grad(layers, X, y, activation, l2):
    """Mean logistic loss plus ``l2/2 * sum(W**2)`` and its gradients."""
    logits, cache, last = forward(layers, X, activation)
    n = X.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))
    loss += 0.5 * l2 * sum(float(np.sum(W * W)) for W, _ in layers)
    delta = ((sigmoid(logits) - y) / n)[:, None]
    grads = [None] * len(layers)
    W, _ = layers[-1]
    grads[-1] = (last.T @ delta + l2 * W, delta.sum(axis=0))
    upstream = delta @ W.T
    for i in range(len(layers) - 2, -1, -1):
        a_in, z, a_out = cache[i]
        dz = upstream * _act_grad(activation, z, a_out)
        Wi, _ = layers[i]
        grads[i] = (a_in.T @ dz + l2 * Wi, dz.sum(axis=0))
        upstream = dz @ Wi.T
    return loss, grads


def train_mlp(X, y, p, rng):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    Z = (X - mean) / std
    n, m = Z.shape
    layers = init_weights([m, *p.hidden_sizes, 1], rng)
    batch = n if p.batch_size is None else min(p.batch_size, n)
    history = []
    for _ in range(p.epochs):
        order = rng.permutation(n) if batch < n else np.arange(n)
        for start in range(0, n, batch):
            sl = order[start:start + batch]
            _, grads = loss_and_grad(layers, Z[sl], y[sl], p.activation, p.l2)
            layers = [(W - p.learning_rate * gW, b - p.learning_rate * gb) for (W, b), (gW, gb) in zip(layers, grads)]
        history.append(loss_and_grad(layers, Z, y, p.activation, p.l2)[0])
    return {"layers": layers, "mean": mean, "std": std, "activation": p.activation}, history


def mlp_scores(params, X):
    Z = (np.asarray(X, dtype=float) - params["mean"]) / params["std"]
    logits, _, _ = forward(params["layers"], Z, params["activation"])
    return sigmoid(logits)
