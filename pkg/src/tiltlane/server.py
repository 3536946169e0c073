"""WebSocket runtime shell around the engine.

One client steers one session. The connection carries newline-free text
messages: client to server, one frame message per payload; server to
client, one snapshot message per payload. All pipeline state lives in the
simulation loop; the network side only appends decoded frames to an ordered
queue and drains a bounded snapshot queue, so a slow or bursty client can
never corrupt determinism, only lose snapshots (drop-oldest).

Two clock disciplines live here:

  run_session     asyncio server; the ticker awaits each tick deadline,
                  catching up without skipping when late.
  run_timed_loop  synchronous wall-clock loop (no sockets) that sleeps
                  coarsely to just short of each deadline and spins the
                  rest; used to demonstrate the timing budget headlessly.
"""
from __future__ import annotations

import asyncio
import logging
import threading
import time
from collections import deque
from typing import NamedTuple, Optional

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from .config import SessionConfig, split_address
from .engine import Engine, encode_snapshot, trace_header_line
from .landmarks import LandmarkFrame, MalformedFrame, decode_frame

logger = logging.getLogger(__name__)

OUTBOUND_QUEUE_SIZE = 16


class ProtocolViolation(Exception):
    """Too many consecutive malformed lines from the client."""


def _offer(q: asyncio.Queue, item: str) -> None:
    # drop-oldest: the freshest snapshot always gets in, the sim never blocks
    while True:
        try:
            q.put_nowait(item)
            return
        except asyncio.QueueFull:
            try:
                q.get_nowait()
            except asyncio.QueueEmpty:
                pass


class _SessionLoop:
    """Engine plus frame arrival queue plus one outbound snapshot queue."""

    def __init__(self, cfg: SessionConfig, sink):
        self.cfg = cfg
        self.engine = Engine(cfg, sink=sink)
        self.pending: deque[LandmarkFrame] = deque()
        self.out_q: asyncio.Queue[str] = asyncio.Queue(maxsize=OUTBOUND_QUEUE_SIZE)
        self.stop = asyncio.Event()

    async def ticker(self, tick_limit: Optional[int] = None) -> None:
        _offer(self.out_q, encode_snapshot(self.engine.begin()))
        loop = asyncio.get_running_loop()
        period = 1.0 / self.cfg.game.tick_hz
        deadline = loop.time() + period
        while not self.stop.is_set():
            delay = deadline - loop.time()
            if delay > 0:
                try:
                    await asyncio.wait_for(self.stop.wait(), timeout=delay)
                    break
                except asyncio.TimeoutError:
                    pass
            batch = list(self.pending)
            self.pending.clear()
            result = self.engine.step(batch)
            if result.snapshot is not None:
                _offer(self.out_q, encode_snapshot(result.snapshot))
            deadline += period  # catch up when late; never skip a tick
            if tick_limit is not None and self.engine.session_tick >= tick_limit:
                break


async def _read_frames(ws, loop_: _SessionLoop) -> None:
    """Decode incoming messages into the arrival queue.

    Malformed lines (bad syntax or a timestamp going backwards) are dropped
    and counted; a long enough consecutive streak is a protocol violation
    and ends the connection.
    """
    cfg = loop_.cfg
    streak = 0
    last_t = -1
    async for message in ws:
        if isinstance(message, bytes):
            message = message.decode("utf-8", errors="replace")
        try:
            frame = decode_frame(message)
            if frame.timestamp_ms < last_t:
                raise MalformedFrame("frame timestamp went backwards")
        except MalformedFrame as e:
            streak += 1
            logger.debug("dropped malformed frame (%d consecutive): %s", streak, e)
            if streak >= cfg.malformed_frame_limit:
                raise ProtocolViolation(
                    f"{streak} consecutive malformed lines") from e
            continue
        streak = 0
        last_t = frame.timestamp_ms
        loop_.pending.append(frame)


async def _send_snapshots(ws, loop_: _SessionLoop) -> None:
    while True:
        line = await loop_.out_q.get()
        await ws.send(line)


async def _attach_client(ws, loop_: _SessionLoop) -> None:
    """Run reader and sender for one connection until it ends."""
    reader = asyncio.ensure_future(_read_frames(ws, loop_))
    sender = asyncio.ensure_future(_send_snapshots(ws, loop_))
    try:
        done, _ = await asyncio.wait({reader, sender},
                                     return_when=asyncio.FIRST_COMPLETED)
        for task in done:
            exc = task.exception()
            if isinstance(exc, ProtocolViolation):
                logger.warning("disconnecting client: %s", exc)
                await ws.close(code=1002, reason="too many malformed frames")
            elif exc is not None and not isinstance(exc, ConnectionClosed):
                raise exc
    finally:
        reader.cancel()
        sender.cancel()
        await asyncio.gather(reader, sender, return_exceptions=True)


async def _serve(cfg: SessionConfig, *, tick_limit: Optional[int],
                 bound: Optional[list], ready: Optional[threading.Event]) -> int:
    host, port = split_address(cfg.listen_address)
    trace_fh = None
    if cfg.trace_out:
        trace_fh = open(cfg.trace_out, "w", encoding="utf-8")
        trace_fh.write(trace_header_line(cfg) + "\n")
    sink = (lambda line: trace_fh.write(line + "\n")) if trace_fh else None

    loop_holder: dict[str, _SessionLoop] = {}
    session_over = asyncio.Event()
    client_attached = False

    if cfg.headless:
        # the game runs whether or not anyone is watching
        loop_holder["loop"] = _SessionLoop(cfg, sink)

    async def handler(ws) -> None:
        nonlocal client_attached
        if client_attached:
            await ws.close(code=1013, reason="session in progress")
            return
        client_attached = True
        try:
            if cfg.headless:
                await _attach_client(ws, loop_holder["loop"])
            else:
                loop_ = _SessionLoop(cfg, sink)
                loop_holder["loop"] = loop_
                ticker = asyncio.ensure_future(loop_.ticker(tick_limit))
                attach = asyncio.ensure_future(_attach_client(ws, loop_))
                try:
                    # ends on client disconnect, or on tick_limit if set
                    await asyncio.wait({ticker, attach},
                                       return_when=asyncio.FIRST_COMPLETED)
                finally:
                    loop_.stop.set()
                    attach.cancel()
                    await ticker
                    await asyncio.gather(attach, return_exceptions=True)
        finally:
            client_attached = False
            if not cfg.headless:
                session_over.set()

    try:
        server = await serve(handler, host, port)
    except OSError as e:
        logger.error("cannot bind %s: %s", cfg.listen_address, e)
        if trace_fh:
            trace_fh.close()
        return 1

    try:
        actual_port = server.sockets[0].getsockname()[1]
        logger.info("listening on %s:%d", host, actual_port)
        if bound is not None:
            bound.append(actual_port)
        if ready is not None:
            ready.set()
        if cfg.headless:
            await loop_holder["loop"].ticker(tick_limit)
        else:
            await session_over.wait()
    finally:
        server.close()
        await server.wait_closed()
        if trace_fh:
            trace_fh.close()
    return 0


def run_session(cfg: SessionConfig, *, tick_limit: Optional[int] = None,
                bound: Optional[list] = None,
                ready: Optional[threading.Event] = None) -> int:
    """Serve one session; blocks until it ends. Returns a process exit status.

    Attended mode (headless=False): waits for a client, runs the loop while
    it is connected, ends on disconnect. Headless mode: the loop starts
    immediately and runs until tick_limit or interruption; a client may
    attach and detach freely.

    tick_limit bounds the session for tests and demos; bound/ready report
    the actual listening port (useful with port 0).
    """
    cfg.validate()
    try:
        return asyncio.run(_serve(cfg, tick_limit=tick_limit,
                                  bound=bound, ready=ready))
    except KeyboardInterrupt:
        return 0


# --- synchronous timing loop -------------------------------------------------

SPIN_THRESHOLD_S = 0.002  # sleep until this close to the deadline, then spin


class LoopStats(NamedTuple):
    ticks: int
    missed_ticks: int   # ticks whose step started more than one period late
    max_lag_ms: float
    elapsed_s: float


def run_timed_loop(cfg: SessionConfig, ticks: int) -> LoopStats:
    """Run the fixed-timestep loop against the wall clock, no sockets.

    Every tick steps with an empty frame batch. Lateness is absorbed by
    catching up, never by skipping, so the only way to miss a tick is to
    start it more than a full period behind its deadline.
    """
    cfg.validate()
    engine = Engine(cfg)
    engine.begin()
    period = 1.0 / cfg.game.tick_hz
    missed = 0
    max_lag = 0.0
    start = time.perf_counter()
    for k in range(1, ticks + 1):
        deadline = start + k * period
        while True:
            now = time.perf_counter()
            remaining = deadline - now
            if remaining <= 0:
                break
            if remaining > SPIN_THRESHOLD_S:
                time.sleep(remaining - SPIN_THRESHOLD_S)
        lag = now - deadline
        if lag > period:
            missed += 1
        if lag > max_lag:
            max_lag = lag
        engine.step(())
    elapsed = time.perf_counter() - start
    return LoopStats(ticks=ticks, missed_ticks=missed,
                     max_lag_ms=max_lag * 1000.0, elapsed_s=elapsed)
