#!/usr/bin/env python3
"""Writes the golden wire frames with Python's struct module (little-endian, packed)."""
import pathlib
import struct

HERE = pathlib.Path(__file__).parent


def header(msg_id, station):
    return struct.pack("<BBI", 1, msg_id, station)


FRAMES = {
    # station 7, t=500 ms, IAV at (12.5, -3.25)
    "cam": header(1, 7) + struct.pack("<HBdd", 500, 2, 12.5, -3.25),
    # TRIGGER, collision risk / longitudinal, 0.8 m, detected at step 42, 5 s validity, quality 4
    "denm_trigger": header(2, 3) + struct.pack("<BBQdIBBB", 1, 2, 42, 0.8, 5, 97, 1, 4),
    # UPDATE, collision risk / crossing
    "denm_update": header(2, 3) + struct.pack("<BBQdIBBB", 2, 2, 43, 0.5, 5, 97, 2, 4),
    # TERMINATE, traffic condition, quality 7
    "denm_terminate": header(2, 9) + struct.pack("<BBQdIBBB", 3, 2, 1000, 1.25, 5, 1, 0, 7),
    # CPM from station 2 with a lidar of high confidence and two objects
    "cpm": header(3, 2)
    + struct.pack("<HBddBBB", 1200, 2, 1.0, 10.0, 1, 3, 2)
    + struct.pack("<Bddd", 3, 2.5, 0.0, -10.0)
    + struct.pack("<Bddd", 1, 1.75, 0.0, 90.0),
    "cpm_empty": header(3, 2) + struct.pack("<HBddBBB", 0, 2, 0.0, 0.0, 1, 3, 0),
    # MCM for intersection 3, turning left
    "mcm": header(4, 11) + struct.pack("<HBddBB", 65535, 2, 30.0, 2.6, 3, 1),
    # ACK_MCM from 4 to 11, intersection 3 turning right, refused
    "ack_mcm": header(5, 4) + struct.pack("<HBddBIBBB", 100, 2, 32.6, 0.0, 2, 11, 3, 2, 0),
    "ack_mcm_yes": header(5, 4) + struct.pack("<HBddBIBBB", 100, 2, 32.6, 0.0, 2, 11, 3, 0, 1),
}

if __name__ == "__main__":
    for name, data in FRAMES.items():
        (HERE / f"{name}.hex").write_text(data.hex() + "\n")
