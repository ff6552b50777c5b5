#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
